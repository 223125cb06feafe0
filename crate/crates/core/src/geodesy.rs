//! Infinitesimal tests for totally geodesic subspaces of a Damek-Ricci
//! space: invariance under the curvature tensor and its derivative, the
//! subalgebra criterion for homogeneous ones, `(-1)`-subspaces, the weak
//! `J^2` condition with its closure `z''`, and the explicit eigenvectors of
//! `R_T` attached to eigenvectors of `K^2`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::clifford::build_irreducible;
use crate::clifford::Class;
use crate::curvature::CurvatureModel;
use crate::damek_ricci::{DRSpace, TangentVec};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm, norm2, Mat};
use crate::scalar::Scalar;

/// Floating membership tolerance.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// A linear subspace of `s = a ⊕ v ⊕ z`, held as an orthonormal basis in
/// flat `[s, V, Y]` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    dim_v: usize,
    basis: Vec<Vec<f64>>,
}

impl Subspace {
    /// Orthonormalizes `vectors` in the given order, dropping dependent ones.
    pub fn span(dim_v: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() < dim_v + 1) {
            return Err(Error::DimensionMismatch { expected: dim_v + 1, got: v.len() });
        }
        let basis = linalg::orthonormalize(vectors, MEMBERSHIP_TOL);
        if basis.is_empty() {
            return Err(Error::ZeroVector("subspace spanning set"));
        }
        Ok(Subspace { dim_v, basis })
    }

    pub fn from_tangents(dim_v: usize, vectors: &[TangentVec<f64>]) -> Result<Self> {
        let flat: Vec<Vec<f64>> = vectors.iter().map(|t| t.to_flat()).collect();
        Self::span(dim_v, &flat)
    }

    /// `a ⊕ z` in the space `sp`.
    pub fn a_plus_z(sp: &DRSpace) -> Self {
        let mut gens = vec![sp.a::<f64>().to_flat()];
        gens.extend((0..sp.m()).map(|k| sp.basis::<f64>(1 + sp.dim_v() + k).to_flat()));
        Subspace::span(sp.dim_v(), &gens).expect("nonempty")
    }

    pub fn whole(sp: &DRSpace) -> Self {
        let gens: Vec<Vec<f64>> = (0..sp.dim_s()).map(|k| sp.basis::<f64>(k).to_flat()).collect();
        Subspace::span(sp.dim_v(), &gens).expect("nonempty")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis[0].len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn tangents(&self) -> Vec<TangentVec<f64>> {
        self.basis.iter().map(|b| TangentVec::from_flat(b, self.dim_v)).collect()
    }

    pub fn project(&self, w: &[f64]) -> Vec<f64> {
        let mut p = vec![0.0; w.len()];
        for b in &self.basis {
            p = linalg::axpy(&p, &dot(w, b), b);
        }
        p
    }

    /// Component of `w` orthogonal to the subspace.
    pub fn off_component(&self, w: &[f64]) -> Vec<f64> {
        linalg::sub(w, &self.project(w))
    }

    pub fn contains(&self, w: &[f64], tol: f64) -> bool {
        norm(&self.off_component(w)) <= tol * norm(w).max(1.0)
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }
}

/// Largest off-`L` component of `R(T_i,T_j)T_k` over basis triples of `L`.
pub fn r_invariance_residual<M: CurvatureModel<f64> + ?Sized>(model: &M, l: &Subspace) -> f64 {
    let b = l.basis();
    let mut worst: f64 = 0.0;
    for i in 0..b.len() {
        for j in (i + 1)..b.len() {
            for k in 0..b.len() {
                let r = model.curvature(&b[i], &b[j], &b[k]);
                worst = worst.max(norm(&l.off_component(&r)));
            }
        }
    }
    worst
}

/// Largest off-`L` component of the fully polarized cubic
/// `T ↦ (∇_T R_T) T'` over basis vectors of `L` in all four slots.
pub fn nabla_r_invariance_residual(sp: &DRSpace, l: &Subspace) -> f64 {
    let dv = sp.dim_v();
    let b = l.tangents();
    let p = |t: &TangentVec<f64>, u: &TangentVec<f64>| {
        sp.nabla_jacobi(t, u).expect("subspace lives in the ambient space").to_flat()
    };
    let n = b.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let (x, y, z) = (&b[i], &b[j], &b[k]);
                let xy = x.add(y);
                let xz = x.add(z);
                let yz = y.add(z);
                let xyz = xy.add(z);
                for u in &b {
                    let mut c = p(&xyz, u);
                    for t in [&xy, &xz, &yz] {
                        c = linalg::sub(&c, &p(t, u));
                    }
                    for t in [x, y, z] {
                        c = linalg::add(&c, &p(t, u));
                    }
                    let c = linalg::scale(&(1.0 / 6.0), &c);
                    worst = worst.max(norm(&l.off_component(&c)));
                }
            }
        }
    }
    let _ = dv;
    worst
}

/// The part of the subalgebra criterion that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomogeneityCondition {
    ContainsA,
    Splits,
    BracketClosed,
    CliffordClosed,
}

impl HomogeneityCondition {
    pub fn name(self) -> &'static str {
        match self {
            HomogeneityCondition::ContainsA => "contains-a",
            HomogeneityCondition::Splits => "splits-a-v-z",
            HomogeneityCondition::BracketClosed => "bracket-v-v-in-z",
            HomogeneityCondition::CliffordClosed => "j-z-v-in-v",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub condition: HomogeneityCondition,
    pub residual: f64,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneityVerdict {
    pub holds: bool,
    pub failure: Option<Certificate>,
}

/// Whether `L = a ⊕ v' ⊕ z'` with `[v',v'] ⊂ z'` and `J_{z'} v' ⊂ v'`.
pub fn is_homogeneous_tg(sp: &DRSpace, l: &Subspace) -> HomogeneityVerdict {
    let fail = |condition, residual, witness| HomogeneityVerdict {
        holds: false,
        failure: Some(Certificate { condition, residual, witness }),
    };
    let a = sp.a::<f64>().to_flat();
    let off = norm(&l.off_component(&a));
    if off > MEMBERSHIP_TOL {
        return fail(HomogeneityCondition::ContainsA, off, vec![]);
    }
    let dv = sp.dim_v();
    let mut vs = Vec::new();
    let mut zs = Vec::new();
    for (i, t) in l.tangents().iter().enumerate() {
        let pv = sp.from_v(t.v.clone());
        let pz = sp.from_z(t.y.clone());
        for part in [&pv, &pz] {
            let off = norm(&l.off_component(&part.to_flat()));
            if off > MEMBERSHIP_TOL {
                return fail(HomogeneityCondition::Splits, off, vec![i]);
            }
        }
        vs.push(t.v.clone());
        zs.push(t.y.clone());
    }
    let vprime = linalg::orthonormalize(&vs, MEMBERSHIP_TOL);
    let zprime = linalg::orthonormalize(&zs, MEMBERSHIP_TOL);
    for i in 0..vprime.len() {
        for j in (i + 1)..vprime.len() {
            let br = sp.bracket_vv(&vprime[i], &vprime[j]);
            let off = norm(&l.off_component(&sp.from_z(br).to_flat()));
            if off > MEMBERSHIP_TOL {
                return fail(HomogeneityCondition::BracketClosed, off, vec![i, j]);
            }
        }
    }
    for (i, z) in zprime.iter().enumerate() {
        for (j, v) in vprime.iter().enumerate() {
            let w = sp.from_v(sp.j(z, v));
            let off = norm(&l.off_component(&w.to_flat()));
            if off > MEMBERSHIP_TOL {
                return fail(HomogeneityCondition::CliffordClosed, off, vec![i, j]);
            }
        }
    }
    debug_assert!(dv > 0);
    HomogeneityVerdict { holds: true, failure: None }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinusOneVerdict {
    pub holds: bool,
    /// The basis-pair sectional curvature farthest from `-1`.
    pub worst: f64,
}

/// Whether every basis 2-plane of `L` has sectional curvature `-1`.
pub fn is_minus_one_subspace<M: CurvatureModel<f64> + ?Sized>(model: &M, l: &Subspace) -> Result<MinusOneVerdict> {
    if l.dim() < 2 {
        return Err(Error::Precondition(format!("dim L = {} < 2", l.dim())));
    }
    let b = l.basis();
    let mut worst = -1.0;
    for i in 0..b.len() {
        for j in (i + 1)..b.len() {
            let k = model.curvature4(&b[j], &b[i], &b[i], &b[j]);
            if (k + 1.0).abs() > (worst + 1.0_f64).abs() {
                worst = k;
            }
        }
    }
    Ok(MinusOneVerdict { holds: (worst + 1.0).abs() <= 1e-9, worst })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakJ2Report {
    pub holds: bool,
    /// Largest `|residual| / |J_{X1} J_{X2} V|` over orthogonal basis pairs.
    pub worst: f64,
    /// First failing pair of basis indices.
    pub witness: Option<(usize, usize)>,
}

/// Orthogonal basis of `z'` and `span(V, J_{e_k} V)`; the latter is already
/// orthogonal since `J_{e_k}` are skew and anticommute.
fn weak_j2_frame<T: Scalar>(sp: &DRSpace, v: &[T], zprime: &[Vec<T>], tol: f64) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let zb = linalg::orthogonal_basis(zprime, tol);
    let mut frame = vec![v.to_vec()];
    frame.extend((0..sp.m()).map(|k| sp.j(&crate::curvature::unit::<T>(sp.m(), k), v)));
    (zb, frame)
}

/// `J_{X1} J_{X2} V ∈ J_z V ⊕ ℝV` for all `X1, X2 ∈ z'`. Exact scalars test
/// membership exactly; `f64` uses a relative tolerance.
pub fn weak_j2_check<T: Scalar>(sp: &DRSpace, v: &[T], zprime: &[Vec<T>], tol: f64) -> Result<WeakJ2Report> {
    if linalg::is_zero_vec(v, 0.0) {
        return Err(Error::ZeroVector("V"));
    }
    if zprime.iter().any(|z| z.len() != sp.m()) {
        return Err(Error::DimensionMismatch { expected: sp.m(), got: zprime[0].len() });
    }
    let (zb, frame) = weak_j2_frame(sp, v, zprime, tol);
    let mut worst: f64 = 0.0;
    let mut witness = None;
    for i in 0..zb.len() {
        for j in (i + 1)..zb.len() {
            let w = sp.j(&zb[i], &sp.j(&zb[j], v));
            let r = linalg::residual_against(&frame, &w);
            let rel = libm::sqrt(norm2(&r).to_f64() / norm2(&w).to_f64().max(f64::MIN_POSITIVE));
            let bad = if T::EXACT { !linalg::is_zero_vec(&r, 0.0) } else { rel > tol };
            if bad && witness.is_none() {
                witness = Some((i, j));
            }
            worst = worst.max(rel);
        }
    }
    Ok(WeakJ2Report { holds: witness.is_none(), worst, witness })
}

/// The four alternatives for a constant-curvature totally geodesic datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureCase {
    I,
    II,
    III,
    IV,
}

impl ClosureCase {
    pub fn label(self) -> &'static str {
        match self {
            ClosureCase::I => "i",
            ClosureCase::II => "ii",
            ClosureCase::III => "iii",
            ClosureCase::IV => "iv",
        }
    }

    /// Decided by `(dim z', dim z'', dim v')` alone.
    pub fn classify(dims: (usize, usize, usize)) -> Result<Self> {
        match dims {
            (1, 1, 2) => Ok(ClosureCase::I),
            (2..=3, 3, 4) => Ok(ClosureCase::II),
            (3, 6, 8) => Ok(ClosureCase::III),
            (4..=7, 7, 8) => Ok(ClosureCase::IV),
            other => Err(Error::NoCaseMatch(other)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZClosure<T> {
    /// Orthogonal basis of `z'' = z' + z_0`.
    pub zdouble: Vec<Vec<T>>,
    /// Orthogonal basis of `v'`, the smallest `J_{z'}`-invariant space
    /// containing `V`.
    pub vprime: Vec<Vec<T>>,
    pub dim_zprime: usize,
    pub case: ClosureCase,
}

impl<T: Scalar> ZClosure<T> {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.dim_zprime, self.zdouble.len(), self.vprime.len())
    }
}

/// `z'' = z' + span{Z : J_{X1} J_{X2} V = J_Z V + cV}` together with `v'` and
/// the resulting case.
pub fn zdouble_closure<T: Scalar>(sp: &DRSpace, v: &[T], zprime: &[Vec<T>], tol: f64) -> Result<ZClosure<T>> {
    let report = weak_j2_check(sp, v, zprime, tol)?;
    if !report.holds {
        return Err(Error::Precondition(format!(
            "weak J2 condition fails at basis pair {:?}",
            report.witness.unwrap_or_default()
        )));
    }
    let (zb, frame) = weak_j2_frame(sp, v, zprime, tol);
    let nv = norm2(v);
    let mut gens = zb.clone();
    for i in 0..zb.len() {
        for j in (i + 1)..zb.len() {
            let w = sp.j(&zb[i], &sp.j(&zb[j], v));
            let z: Vec<T> = frame[1..].iter().map(|jk| dot(&w, jk) / nv.clone()).collect();
            gens.push(z);
        }
    }
    let zdouble = linalg::orthogonal_basis(&gens, tol);

    let mut vprime = linalg::orthogonal_basis(&[v.to_vec()], tol);
    loop {
        let mut cand = vprime.clone();
        for z in &zb {
            for w in &vprime {
                cand.push(sp.j(z, w));
            }
        }
        let next = linalg::orthogonal_basis(&cand, tol);
        let grown = next.len() > vprime.len();
        vprime = next;
        if !grown {
            break;
        }
    }
    let dims = (zb.len(), zdouble.len(), vprime.len());
    let case = ClosureCase::classify(dims)?;
    Ok(ZClosure { zdouble, vprime, dim_zprime: zb.len(), case })
}

/// The 15-dimensional example: `m = 6`, `dim v = 8`, with a 4-dimensional
/// `(-1)`-subspace that is totally geodesic but not homogeneous.
#[derive(Clone, Debug)]
pub struct Example15 {
    pub space: DRSpace,
    /// Eigenvector of `J_1 J_2 J_3` for the requested eigenvalue.
    pub w: Vec<f64>,
    pub v: Vec<f64>,
    /// `T_0 = V + sA`, `T_i = s X_i + J_i V` (unnormalized, mutually orthogonal).
    pub tangents: [TangentVec<f64>; 4],
    pub subspace: Subspace,
}

/// The `m = 6` space used by [`build_example_15d`].
pub fn example_15d_space() -> DRSpace {
    DRSpace::new(build_irreducible(6, Class::Positive).expect("m = 6 is supported"))
}

/// `J_7 = J_1 ⋯ J_6` as an exact matrix.
pub fn example_15d_j7(sp: &DRSpace) -> Mat<crate::BigRational> {
    let mut out = Mat::identity(sp.dim_v());
    for k in 0..6 {
        out = out.matmul(&sp.rep().generator(k).to_matrix());
    }
    out
}

/// Eigenvector `W` of `J_1 J_2 J_3` with eigenvalue `eigen_sign`, followed by
/// `V = aW + b J_7 W` and the four tangent vectors; generic so the
/// construction can be replayed in exact arithmetic.
pub fn example_15d_vectors<T: Scalar>(
    sp: &DRSpace,
    eigen_sign: i64,
    a: T,
    b: T,
    s: T,
) -> Result<(Vec<T>, Vec<T>, [TangentVec<T>; 4])> {
    if sp.m() != 6 {
        return Err(Error::Precondition(format!("example needs m = 6, got {}", sp.m())));
    }
    if eigen_sign != 1 && eigen_sign != -1 {
        return Err(Error::Precondition(format!("eigenvalue sign must be ±1, got {eigen_sign}")));
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroVector("(a, b)"));
    }
    let g = |k: usize, x: &[T]| sp.rep().generator(k).apply(x);
    let j123 = |x: &[T]| g(0, &g(1, &g(2, x)));
    let j7 = |x: &[T]| {
        let mut y = x.to_vec();
        for k in (0..6).rev() {
            y = g(k, &y);
        }
        y
    };
    let eps = T::from_i64(eigen_sign);
    let w = (0..sp.dim_v())
        .map(|k| {
            let e = crate::curvature::unit::<T>(sp.dim_v(), k);
            linalg::axpy(&e, &eps, &j123(&e))
        })
        .find(|w| !linalg::is_zero_vec(w, 0.0))
        .expect("J1J2J3 is a symmetric involution with both eigenvalues");
    let v = linalg::add(&linalg::scale(&a, &w), &linalg::scale(&b, &j7(&w)));
    let t0 = TangentVec::new(v.clone(), vec![T::zero(); 6], s.clone());
    let ti = |i: usize| {
        let mut y = vec![T::zero(); 6];
        y[i] = s.clone();
        TangentVec::new(g(i, &v), y, T::zero())
    };
    Ok((w, v.clone(), [t0, ti(0), ti(1), ti(2)]))
}

pub fn build_example_15d(eigen_sign: i64, a: f64, b: f64, s: f64) -> Result<Example15> {
    let space = example_15d_space();
    let (w, v, tangents) = example_15d_vectors(&space, eigen_sign, a, b, s)?;
    let subspace = Subspace::from_tangents(space.dim_v(), &tangents)?;
    Ok(Example15 { space, w, v, tangents, subspace })
}

/// Real roots of `x^3 + 3x^2 - c`, ascending.
fn cubic_roots(c: f64) -> Vec<f64> {
    // x = w - 1 gives w^3 - 3w + (2 - c) = 0.
    let h = (c - 2.0) / 2.0;
    let ws: Vec<f64> = if h.abs() < 1.0 {
        let theta = libm::acos(h);
        (0..3)
            .map(|k| 2.0 * libm::cos((theta - 2.0 * core::f64::consts::PI * k as f64) / 3.0))
            .collect()
    } else {
        let g = libm::acosh(h.abs());
        vec![h.signum() * 2.0 * libm::cosh(g / 3.0)]
    };
    let mut xs: Vec<f64> = ws
        .into_iter()
        .map(|w| {
            // one Newton polish on the original cubic
            let x = w - 1.0;
            let f = x * x * x + 3.0 * x * x - c;
            let df = 3.0 * x * x + 6.0 * x;
            if df.abs() > 1e-12 {
                x - f / df
            } else {
                x
            }
        })
        .collect();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    xs
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub kappa: f64,
    /// Eigenvector of `R_T`, reported up to scale as produced by the formula.
    pub e: TangentVec<f64>,
    /// `|R_T E - κE| / |E|`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenReport {
    pub pairs: Vec<EigenPair>,
    /// Roots skipped because `4κ + 1 + 3|V|^2 = 0` or the formula gave `E = 0`.
    pub skipped_roots: Vec<f64>,
}

/// Eigenvectors of `R_T` in the span of `X, J_X V, J_X J_Y V, J_{KX} V` for a
/// unit `T = V + Y + sA` and a unit eigenvector `X ⊥ Y` of `K^2` with
/// eigenvalue `μ ≠ -1`.
pub fn eigen_e(sp: &DRSpace, t: &TangentVec<f64>, x: &[f64], mu: f64) -> Result<EigenReport> {
    sp.check(t)?;
    if x.len() != sp.m() {
        return Err(Error::DimensionMismatch { expected: sp.m(), got: x.len() });
    }
    if (t.norm2() - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!("T must be a unit vector, |T|^2 = {}", t.norm2())));
    }
    if (mu + 1.0).abs() < 1e-12 {
        return Err(Error::ExcludedCase("K^2 eigenvalue mu = -1"));
    }
    if (norm2(x) - 1.0).abs() > 1e-9 || dot(x, &t.y).abs() > 1e-9 {
        return Err(Error::Precondition("X must be a unit vector orthogonal to Y".into()));
    }
    let (v, y, s) = (&t.v, &t.y, t.s);
    let k = sp.k_operator(v, y)?;
    let k2x = k.matrix().matmul(&k.matrix()).apply(x);
    if norm(&linalg::axpy(&k2x, &-mu, x)) > 1e-8 {
        return Err(Error::Precondition("X is not an eigenvector of K^2 for mu".into()));
    }
    let nv = norm2(v);
    let ny = norm2(y);
    let kx = k.matrix().apply(x);
    let jx_v = sp.j(x, v);
    let jx_jy_v = sp.j(x, &sp.j(y, v));
    let jkx_v = sp.j(&kx, v);
    let c = 27.0 * nv * nv * ny * (1.0 + mu);
    let mut pairs = Vec::new();
    let mut skipped_roots = Vec::new();
    let r_t = sp.jacobi_op(t)?;
    for root in cubic_roots(c) {
        let kappa = (root - 1.0) / 4.0;
        let p = root + 3.0 * nv;
        if p.abs() < 1e-12 {
            skipped_roots.push(kappa);
            continue;
        }
        let mut ev = linalg::scale(&(3.0 * p), &jx_jy_v);
        ev = linalg::axpy(&ev, &(-3.0 * s * root), &jx_v);
        ev = linalg::axpy(&ev, &(-9.0 * nv * libm::sqrt(ny)), &jkx_v);
        let e = TangentVec::new(ev, linalg::scale(&(root * p), x), 0.0);
        let en = e.norm();
        if en < 1e-12 {
            skipped_roots.push(kappa);
            continue;
        }
        let re = r_t.apply(&e.to_flat());
        let residual = norm(&linalg::axpy(&re, &-kappa, &e.to_flat())) / en;
        pairs.push(EigenPair { kappa, e, residual });
    }
    Ok(EigenReport { pairs, skipped_roots })
}

/// Exact eigenvectors of `K^2` on `Y^⊥ ∩ z`: with `K̃ = |Y| K`, the kernel of
/// `K̃^2 - μ̃` restricted to `Y^⊥`, where `μ̃ = μ |Y|^2`.
pub fn k2_eigenvectors<T: Scalar>(sp: &DRSpace, v: &[T], y: &[T], mu_scaled: &T, tol: f64) -> Result<Vec<Vec<T>>> {
    let k = sp.k_operator(v, y)?;
    let m = sp.m();
    let shifted = k.scaled_square().sub(&Mat::identity(m).scale(mu_scaled));
    let mut rows: Vec<Vec<T>> = (0..m).map(|i| shifted.row(i)).collect();
    rows.push(y.to_vec());
    Ok(Mat::from_rows(&rows).kernel(tol))
}

/// The block of `(2/3) ∇_T R_T` on
/// `l_4 = span(J_X V, J_{KX} J_Y V, J_X J_Y V, J_{KX} V)`: row `i` holds the
/// coordinates of the image of the `i`-th spanning vector.
pub fn l4_matrix<T: Scalar>(v_norm2: &T, y_norm: &T, mu: &T) -> Mat<T> {
    let z = T::zero();
    let o = T::one();
    let y = y_norm.clone();
    let rows = vec![
        vec![z.clone(), z.clone(), -o.clone(), y.clone()],
        vec![z.clone(), z.clone(), -(mu.clone() * y.clone()), -(y.clone() * y.clone())],
        vec![-(y.clone() * y.clone()), -y.clone(), z.clone(), z.clone()],
        vec![mu.clone() * y, -o, z.clone(), z],
    ];
    Mat::from_rows(&rows).scale(v_norm2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct L4Report<T> {
    /// Largest entry of `N b_i - (predicted image)` over the four spanning
    /// vectors, `N = (2/3) ∇_T R_T`.
    pub image_residual: T,
    /// Largest entry of `N^2 b_i - |V|^4 |Y|^2 (1 + μ) b_i`.
    pub square_residual: T,
    /// The four spanning vectors, scaled by `|Y|` where needed so that they
    /// stay rational: `J_X V, J_{K̃X} J_Y V, J_X J_Y V, J_{K̃X} V`.
    pub spanning: [Vec<T>; 4],
}

fn max_entry<T: Scalar>(vs: &[Vec<T>]) -> T {
    let mut best = T::zero();
    let mut best_f = 0.0;
    for v in vs {
        for x in v {
            let a = x.to_f64().abs();
            if a > best_f || (best.is_zero() && !x.is_zero()) {
                best_f = a;
                best = if x.to_f64() < 0.0 { -x.clone() } else { x.clone() };
            }
        }
    }
    best
}

/// Checks the four images of `(2/3) ∇_T R_T` on `l_4` and that its square is
/// `|V|^4 |Y|^2 (1 + μ)`, with `μ̃ = μ |Y|^2` and `K̃^2 X = μ̃ X`, `X ⊥ Y`.
/// The `A`-component of `T` plays no role. Exact for rational inputs.
pub fn l4_block_check<T: Scalar>(
    sp: &DRSpace,
    t: &TangentVec<T>,
    x: &[T],
    mu_scaled: &T,
    tol: f64,
) -> Result<L4Report<T>> {
    sp.check(t)?;
    let (v, y) = (&t.v, &t.y);
    let k = sp.k_operator(v, y)?;
    let kx = k.scaled.apply(x);
    let eig = linalg::axpy(&k.scaled.apply(&kx), &-mu_scaled.clone(), x);
    if !linalg::is_zero_vec(&eig, tol) || !dot(x, y).is_negligible(tol) {
        return Err(Error::Precondition("X must satisfy K̃²X = μ̃X and X ⊥ Y".into()));
    }
    if linalg::is_zero_vec(x, 0.0) {
        return Err(Error::ZeroVector("X"));
    }
    let jy_v = sp.j(y, v);
    let b = [sp.j(x, v), sp.j(&kx, &jy_v), sp.j(x, &jy_v), sp.j(&kx, v)];
    let nv = norm2(v);
    let ny = k.y_norm2.clone();
    let n = |w: &[T]| -> Vec<T> {
        let out = sp.nabla_jacobi(t, &sp.from_v(w.to_vec())).expect("shapes agree");
        linalg::scale(&T::ratio(2, 3), &out.v)
    };
    let comb = |c: [T; 4]| -> Vec<T> {
        let mut out = vec![T::zero(); v.len()];
        for (ci, bi) in c.iter().zip(&b) {
            out = linalg::axpy(&out, ci, bi);
        }
        linalg::scale(&nv, &out)
    };
    let z = T::zero;
    let predicted = [
        comb([z(), z(), -T::one(), T::one()]),
        comb([z(), z(), -mu_scaled.clone(), -ny.clone()]),
        comb([-ny.clone(), -T::one(), z(), z()]),
        comb([mu_scaled.clone(), -T::one(), z(), z()]),
    ];
    let factor = nv.clone() * nv.clone() * (ny + mu_scaled.clone());
    let mut image_diffs = Vec::new();
    let mut square_diffs = Vec::new();
    for (bi, pi) in b.iter().zip(&predicted) {
        let nb = n(bi);
        image_diffs.push(linalg::sub(&nb, pi));
        square_diffs.push(linalg::axpy(&n(&nb), &-factor.clone(), bi));
    }
    Ok(L4Report { image_residual: max_entry(&image_diffs), square_residual: max_entry(&square_diffs), spanning: b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_module;
    use crate::rat;
    use crate::sampling::SampleRng;
    use crate::BigRational;
    use num_traits::{One, Zero};

    fn space(m: usize) -> DRSpace {
        DRSpace::new(build_irreducible(m, Class::Positive).unwrap())
    }

    #[test]
    fn a_plus_z_is_homogeneous_and_invariant() {
        let sp = space(3);
        let l = Subspace::a_plus_z(&sp);
        assert!(is_homogeneous_tg(&sp, &l).holds);
        assert!(r_invariance_residual(&sp, &l) < 1e-12);
        assert_eq!(nabla_r_invariance_residual(&sp, &l), 0.0);
        let v = is_minus_one_subspace(&sp, &l).unwrap();
        assert!(v.holds, "{v:?}");
    }

    #[test]
    fn whole_space_is_invariant() {
        let sp = space(2);
        let l = Subspace::whole(&sp);
        assert!(r_invariance_residual(&sp, &l) < 1e-12);
        assert!(nabla_r_invariance_residual(&sp, &l) < 1e-12);
        assert!(is_homogeneous_tg(&sp, &l).holds);
    }

    #[test]
    fn abelian_v_prime_is_homogeneous_but_hyperplane_is_not() {
        let sp = space(1);
        // m = 1: v is 2-dimensional, any line in v is abelian.
        let a = sp.a::<f64>().to_flat();
        let u = sp.from_v(vec![1.0, 0.0]).to_flat();
        let l = Subspace::span(2, &[a.clone(), u.clone()]).unwrap();
        assert!(is_homogeneous_tg(&sp, &l).holds);
        assert!(r_invariance_residual(&sp, &l) < 1e-12);
        // a tilted line inside a ⊕ v' does not split
        let tilted = linalg::add(&a, &u);
        let l2 = Subspace::span(2, &[tilted]).unwrap();
        let verdict = is_homogeneous_tg(&sp, &l2);
        assert!(!verdict.holds);
        assert_eq!(verdict.failure.unwrap().condition, HomogeneityCondition::ContainsA);
    }

    #[test]
    fn a_and_v_line_is_not_minus_one() {
        let sp = space(2);
        let l = Subspace::span(4, &[sp.a::<f64>().to_flat(), sp.basis::<f64>(1).to_flat()]).unwrap();
        let v = is_minus_one_subspace(&sp, &l).unwrap();
        assert!(!v.holds);
        assert!((v.worst + 0.25).abs() < 1e-12);
    }

    #[test]
    fn random_three_plane_is_not_invariant() {
        // m = 5 is not symmetric, so the derivative term does not vanish.
        let sp = space(5);
        let mut rng = SampleRng::new(7, 0);
        let gens: Vec<Vec<f64>> = (0..3).map(|_| rng.gaussian_vec(sp.dim_s())).collect();
        let l = Subspace::span(8, &gens).unwrap();
        assert!(r_invariance_residual(&sp, &l) > 1e-3);
        assert!(nabla_r_invariance_residual(&sp, &l) > 1e-3);
        assert!(!is_homogeneous_tg(&sp, &l).holds);
    }

    #[test]
    fn example_15d_is_minus_one_and_totally_geodesic() {
        for sign in [1, -1] {
            let ex = build_example_15d(sign, 0.7, -1.3, 0.4).unwrap();
            assert!(ex.subspace.orthonormality_defect() < 1e-12);
            let mo = is_minus_one_subspace(&ex.space, &ex.subspace).unwrap();
            assert!((mo.worst + 1.0).abs() < 1e-12, "{mo:?}");
            assert!(r_invariance_residual(&ex.space, &ex.subspace) < 1e-12);
            assert!(nabla_r_invariance_residual(&ex.space, &ex.subspace) < 1e-12);
            assert!(!is_homogeneous_tg(&ex.space, &ex.subspace).holds);
        }
    }

    #[test]
    fn example_15d_j7_and_bracket_norm() {
        let sp = example_15d_space();
        let j7 = example_15d_j7(&sp);
        let id = Mat::<BigRational>::identity(8);
        assert_eq!(j7.matmul(&j7), id.scale(&rat(-1, 1)));
        for k in 0..6 {
            let jk = sp.rep().generator(k).to_matrix::<BigRational>();
            assert_eq!(j7.matmul(&jk).add(&jk.matmul(&j7)), Mat::zeros(8, 8));
        }
        let (_, v, _) = example_15d_vectors(&sp, 1, rat(2, 3), rat(-1, 2), rat(5, 1)).unwrap();
        let e = |k| crate::curvature::unit::<BigRational>(6, k);
        let br = sp.bracket_vv(&sp.j(&e(0), &v), &sp.j(&e(1), &v));
        let nv = norm2(&v);
        assert_eq!(norm2(&br), nv.clone() * nv);
    }

    #[test]
    fn example_15d_sectionals_exact() {
        let sp = example_15d_space();
        for sign in [1, -1] {
            let (_, _, t) = example_15d_vectors(&sp, sign, rat(1, 3), rat(2, 1), rat(-3, 4)).unwrap();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    assert_eq!(sp.sectional(&t[i], &t[j]).unwrap(), rat(-1, 1));
                }
            }
        }
    }

    #[test]
    fn minus_one_subspace_forces_minus_identity() {
        let ex = build_example_15d(-1, 1.1, 0.3, -0.8).unwrap();
        let b = ex.subspace.basis();
        let mut rng = SampleRng::new(3, 0);
        for _ in 0..10 {
            let c = rng.unit_vec(4);
            let mut t = vec![0.0; b[0].len()];
            for (ci, bi) in c.iter().zip(b) {
                t = linalg::axpy(&t, ci, bi);
            }
            for bi in b {
                let perp = linalg::axpy(bi, &-dot(bi, &t), &t);
                let image = CurvatureModel::<f64>::jacobi(&ex.space, &t, &perp);
                let projected = ex.subspace.project(&image);
                assert!(norm(&linalg::add(&projected, &perp)) < 1e-9);
            }
        }
    }

    #[test]
    fn weak_j2_cases() {
        // dim z' = 1: trivially true, case (i)
        let sp = space(3);
        let v: Vec<BigRational> = vec![rat(1, 1), rat(2, 1), rat(0, 1), rat(-1, 1)];
        let z1 = vec![vec![rat(1, 1), rat(1, 1), rat(0, 1)]];
        assert!(weak_j2_check(&sp, &v, &z1, 0.0).unwrap().holds);
        let c = zdouble_closure(&sp, &v, &z1, 0.0).unwrap();
        assert_eq!((c.case, c.dims()), (ClosureCase::I, (1, 1, 2)));

        // quaternionic type: z' = span(e1, e2) closes to z, v' = v
        let z2 = vec![vec![rat(1, 1), rat(0, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1), rat(0, 1)]];
        let c = zdouble_closure(&sp, &v, &z2, 0.0).unwrap();
        assert_eq!((c.case, c.dims()), (ClosureCase::II, (2, 3, 4)));
    }

    #[test]
    fn example_15d_closure_is_case_iii() {
        let sp = example_15d_space();
        let (_, v, _) = example_15d_vectors(&sp, 1, rat(3, 1), rat(1, 1), rat(0, 1)).unwrap();
        let zp: Vec<Vec<BigRational>> = (0..3).map(|k| crate::curvature::unit(6, k)).collect();
        assert!(weak_j2_check(&sp, &v, &zp, 0.0).unwrap().holds);
        let c = zdouble_closure(&sp, &v, &zp, 0.0).unwrap();
        assert_eq!((c.case, c.dims()), (ClosureCase::III, (3, 6, 8)));
    }

    #[test]
    fn full_center_in_m8_fails_weak_j2() {
        let sp = space(8);
        let zp: Vec<Vec<BigRational>> = (0..8).map(|k| crate::curvature::unit(8, k)).collect();
        let mut rng = SampleRng::new(11, 0);
        let v = rng.rational_vec(16, 5, 3);
        let r = weak_j2_check(&sp, &v, &zp, 0.0).unwrap();
        assert!(!r.holds && r.witness.is_some());
        assert!(matches!(zdouble_closure(&sp, &v, &zp, 0.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn closure_case_table() {
        assert_eq!(ClosureCase::classify((3, 3, 4)).unwrap(), ClosureCase::II);
        assert_eq!(ClosureCase::classify((7, 7, 8)).unwrap(), ClosureCase::IV);
        assert!(matches!(ClosureCase::classify((2, 5, 4)), Err(Error::NoCaseMatch(_))));
    }

    #[test]
    fn cubic_roots_satisfy_equation() {
        for c in [0.0, 0.5, 3.9, 4.0, 17.0] {
            let roots = cubic_roots(c);
            assert!(!roots.is_empty());
            for x in roots {
                assert!((x * x * x + 3.0 * x * x - c).abs() < 1e-9 * (1.0 + c));
            }
        }
    }

    fn random_unit_t(sp: &DRSpace, rng: &mut SampleRng) -> TangentVec<f64> {
        TangentVec::from_flat(&rng.unit_vec(sp.dim_s()), sp.dim_v())
    }

    #[test]
    fn eigen_e_in_m2_and_generic_mu() {
        let sp = space(2);
        for i in 0..20 {
            let mut rng = SampleRng::new(5, i);
            let t = random_unit_t(&sp, &mut rng);
            let x = linalg::scale(&(1.0 / norm(&t.y)), &[-t.y[1], t.y[0]]);
            let rep = eigen_e(&sp, &t, &x, 0.0).unwrap();
            assert!(!rep.pairs.is_empty());
            for p in rep.pairs {
                assert!(p.residual < 1e-8, "{p:?}");
            }
        }
        let sp = space(5);
        let mut rng = SampleRng::new(6, 0);
        let t = random_unit_t(&sp, &mut rng);
        let k = sp.k_operator(&t.v, &t.y).unwrap();
        let comp = crate::damek_ricci::complement_basis(&t.y);
        let k2 = k.matrix().matmul(&k.matrix());
        let restricted = Mat::from_fn(comp.len(), comp.len(), |i, j| dot(&comp[i], &k2.apply(&comp[j])));
        let eig = linalg::sym_eigen(&restricted);
        for (mu, coeffs) in eig.values.iter().zip(&eig.vectors) {
            if (mu + 1.0).abs() < 1e-9 {
                continue;
            }
            let mut x = vec![0.0; 5];
            for (c, b) in coeffs.iter().zip(&comp) {
                x = linalg::axpy(&x, c, b);
            }
            let rep = eigen_e(&sp, &t, &x, *mu).unwrap();
            assert_eq!(rep.pairs.len() + rep.skipped_roots.len(), 3);
            for p in rep.pairs {
                assert!(p.residual < 1e-8, "{p:?}");
            }
        }
    }

    #[test]
    fn eigen_e_rejects_bad_input() {
        let sp = space(2);
        let t = TangentVec::new(vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0], 0.0);
        let t = t.scale(&(1.0 / t.norm()));
        assert!(matches!(eigen_e(&sp, &t, &[1.0, 0.0], -1.0), Err(Error::ExcludedCase(_))));
        let long = t.scale(&2.0);
        assert!(matches!(eigen_e(&sp, &long, &[1.0, 0.0], 0.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn l4_block_exact_for_quaternionic_pair() {
        // m = 3 with both classes: K̃ on the 2-dim Y^⊥ is a scalar rotation,
        // so every X ⊥ Y is an eigenvector of K̃^2 with rational eigenvalue.
        let sp = DRSpace::new(build_module(3, 1, 1).unwrap());
        let mut rng = SampleRng::new(9, 0);
        let mut checked = 0;
        while checked < 5 {
            let v = rng.rational_vec(8, 3, 2);
            let y = rng.rational_vec(3, 3, 2);
            if linalg::is_zero_vec(&v, 0.0) || linalg::is_zero_vec(&y, 0.0) {
                continue;
            }
            let x = vec![y[1].clone(), -y[0].clone(), rat(0, 1)];
            if linalg::is_zero_vec(&x, 0.0) {
                continue;
            }
            let k = sp.k_operator(&v, &y).unwrap();
            let k2x = k.scaled_square().apply(&x);
            let idx = x.iter().position(|c| !c.is_zero()).unwrap();
            let mu = k2x[idx].clone() / x[idx].clone();
            let t = TangentVec::new(v, y, rat(1, 3));
            let rep = l4_block_check(&sp, &t, &x, &mu, 0.0).unwrap();
            assert!(rep.image_residual.is_zero());
            assert!(rep.square_residual.is_zero());
            checked += 1;
        }
    }

    #[test]
    fn l4_matrix_squares_to_scalar() {
        use crate::surd::QuadSurd;
        let y = QuadSurd::sqrt_of(&rat(7, 3)).unwrap();
        let nv = QuadSurd::rational(rat(5, 2));
        let mu = QuadSurd::rational(rat(-2, 5));
        let q = l4_matrix(&nv, &y, &mu);
        let expected = nv.clone() * nv * y.clone() * y * (QuadSurd::one() + mu);
        assert_eq!(q.matmul(&q), Mat::identity(4).scale(&expected));
    }

    #[test]
    fn k2_kernel_in_m6_is_exact() {
        let sp = space(6);
        let mut rng = SampleRng::new(4, 0);
        let v = rng.rational_vec(8, 4, 3);
        let y = rng.rational_vec(6, 4, 3);
        let xs = k2_eigenvectors(&sp, &v, &y, &rat(0, 1), 0.0).unwrap();
        assert_eq!(xs.len(), 1);
        let t = TangentVec::new(v, y, rat(2, 1));
        let rep = l4_block_check(&sp, &t, &xs[0], &rat(0, 1), 0.0).unwrap();
        assert!(rep.image_residual.is_zero() && rep.square_residual.is_zero());
    }
}
