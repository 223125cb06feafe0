//! The metric solvable algebra `s = a ⊕ v ⊕ z` built from a Clifford module,
//! with the closed-form curvature evaluators at the identity.
//!
//! Coordinates of `T = V + Y + sA` are laid out as `[s, V..., Y...]`; the
//! inner product is the standard one in these coordinates.

use alloc::vec;
use alloc::vec::Vec;

use crate::clifford::CliffordRep;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm2, Mat};
use crate::sampling::SampleRng;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct TangentVec<T> {
    pub v: Vec<T>,
    pub y: Vec<T>,
    pub s: T,
}

impl<T: Scalar> TangentVec<T> {
    pub fn zero(dim_v: usize, m: usize) -> Self {
        TangentVec { v: vec![T::zero(); dim_v], y: vec![T::zero(); m], s: T::zero() }
    }

    pub fn new(v: Vec<T>, y: Vec<T>, s: T) -> Self {
        TangentVec { v, y, s }
    }

    pub fn dim(&self) -> usize {
        1 + self.v.len() + self.y.len()
    }

    pub fn from_flat(flat: &[T], dim_v: usize) -> Self {
        TangentVec { s: flat[0].clone(), v: flat[1..1 + dim_v].to_vec(), y: flat[1 + dim_v..].to_vec() }
    }

    pub fn to_flat(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.dim());
        out.push(self.s.clone());
        out.extend(self.v.iter().cloned());
        out.extend(self.y.iter().cloned());
        out
    }

    pub fn dot(&self, other: &Self) -> T {
        dot(&self.v, &other.v) + dot(&self.y, &other.y) + self.s.clone() * other.s.clone()
    }

    pub fn norm2(&self) -> T {
        self.dot(self)
    }

    pub fn add(&self, other: &Self) -> Self {
        TangentVec {
            v: linalg::add(&self.v, &other.v),
            y: linalg::add(&self.y, &other.y),
            s: self.s.clone() + other.s.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        TangentVec { v: linalg::scale(c, &self.v), y: linalg::scale(c, &self.y), s: c.clone() * self.s.clone() }
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        linalg::is_zero_vec(&self.v, tol) && linalg::is_zero_vec(&self.y, tol) && self.s.is_negligible(tol)
    }
}

impl TangentVec<f64> {
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm2())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DRSpace {
    rep: CliffordRep,
}

impl DRSpace {
    pub fn new(rep: CliffordRep) -> Self {
        DRSpace { rep }
    }

    pub fn rep(&self) -> &CliffordRep {
        &self.rep
    }

    pub fn m(&self) -> usize {
        self.rep.m()
    }

    pub fn dim_v(&self) -> usize {
        self.rep.dim_v()
    }

    pub fn dim_s(&self) -> usize {
        1 + self.dim_v() + self.m()
    }

    /// Einstein constant `Tr R_T / |T|^2 = -(dim v / 4 + m)`.
    pub fn einstein_constant(&self) -> f64 {
        -(self.dim_v() as f64 / 4.0 + self.m() as f64)
    }

    pub fn a<T: Scalar>(&self) -> TangentVec<T> {
        let mut t = TangentVec::zero(self.dim_v(), self.m());
        t.s = T::one();
        t
    }

    pub fn from_v<T: Scalar>(&self, v: Vec<T>) -> TangentVec<T> {
        TangentVec { v, y: vec![T::zero(); self.m()], s: T::zero() }
    }

    pub fn from_z<T: Scalar>(&self, y: Vec<T>) -> TangentVec<T> {
        TangentVec { v: vec![T::zero(); self.dim_v()], y, s: T::zero() }
    }

    /// Basis vector `k` in the `[s, V, Y]` layout.
    pub fn basis<T: Scalar>(&self, k: usize) -> TangentVec<T> {
        let mut flat = vec![T::zero(); self.dim_s()];
        flat[k] = T::one();
        TangentVec::from_flat(&flat, self.dim_v())
    }

    pub fn check<T: Scalar>(&self, t: &TangentVec<T>) -> Result<()> {
        if t.v.len() != self.dim_v() {
            return Err(Error::DimensionMismatch { expected: self.dim_v(), got: t.v.len() });
        }
        if t.y.len() != self.m() {
            return Err(Error::DimensionMismatch { expected: self.m(), got: t.y.len() });
        }
        Ok(())
    }

    pub fn j<T: Scalar>(&self, z: &[T], v: &[T]) -> Vec<T> {
        self.rep.j_apply(z, v)
    }

    /// `[U, V] ∈ z` for `U, V ∈ v`.
    pub fn bracket_vv<T: Scalar>(&self, u: &[T], v: &[T]) -> Vec<T> {
        self.rep.bracket_vv(u, v)
    }

    /// Lie bracket of `s`: `[A,U] = U/2`, `[A,Z] = Z`, `z` central.
    pub fn bracket<T: Scalar>(&self, t1: &TangentVec<T>, t2: &TangentVec<T>) -> Result<TangentVec<T>> {
        self.check(t1)?;
        self.check(t2)?;
        let half = T::ratio(1, 2);
        let v = linalg::sub(
            &linalg::scale(&(half.clone() * t1.s.clone()), &t2.v),
            &linalg::scale(&(half * t2.s.clone()), &t1.v),
        );
        let y = linalg::add(
            &self.bracket_vv(&t1.v, &t2.v),
            &linalg::sub(&linalg::scale(&t1.s, &t2.y), &linalg::scale(&t2.s, &t1.y)),
        );
        Ok(TangentVec { v, y, s: T::zero() })
    }

    /// `R_{T1} T2 = R(T2, T1) T1`, evaluated term by term.
    pub fn jacobi_apply<T: Scalar>(&self, t1: &TangentVec<T>, t2: &TangentVec<T>) -> TangentVec<T> {
        let q = |n: i64| T::ratio(n, 4);
        let (vv, yy, s) = (&t1.v, &t1.y, &t1.s);
        let (u, x, r) = (&t2.v, &t2.y, &t2.s);
        let n1 = t1.norm2();
        let ip = t1.dot(t2);
        let nv = norm2(vv);
        let jy_v = self.j(yy, vv);
        let jx_v = self.j(x, vv);
        let jx_jy_v = self.j(x, &jy_v);
        let uv = self.bracket_vv(u, vv);
        let j_uv_v = self.j(&uv, vv);
        let u_jyv = self.bracket_vv(u, &jy_v);
        let xy = dot(x, yy);

        let mut v_out = linalg::scale(&q(3), &jx_jy_v);
        v_out = linalg::axpy(&v_out, &q(3), &j_uv_v);
        v_out = linalg::axpy(&v_out, &(q(3) * r.clone()), &jy_v);
        v_out = linalg::axpy(&v_out, &(-q(3) * s.clone()), &jx_v);
        v_out = linalg::axpy(&v_out, &(-q(1) * n1.clone()), u);
        v_out = linalg::axpy(&v_out, &(q(3) * xy + q(1) * ip.clone()), vv);

        let z_coeff = n1 - q(3) * nv;
        let mut y_out = linalg::scale(&-q(3), &u_jyv);
        y_out = linalg::axpy(&y_out, &(q(3) * s.clone()), &uv);
        y_out = linalg::axpy(&y_out, &-z_coeff.clone(), x);
        y_out = linalg::axpy(&y_out, &ip, yy);

        let a_out = q(3) * dot(u, &jy_v) - r.clone() * z_coeff + s.clone() * (ip - q(3) * dot(u, vv));
        TangentVec { v: v_out, y: y_out, s: a_out }
    }

    /// Matrix of `R_{T1}` in the `[s, V, Y]` basis.
    pub fn jacobi_op<T: Scalar>(&self, t1: &TangentVec<T>) -> Result<Mat<T>> {
        self.check(t1)?;
        let cols: Vec<Vec<T>> =
            (0..self.dim_s()).map(|k| self.jacobi_apply(t1, &self.basis(k)).to_flat()).collect();
        Ok(Mat::from_columns(&cols))
    }

    /// `(∇_{T1} R_{T1}) T2`; depends only on `V`, `Y` of `T1` and `U` of `T2`,
    /// and lies in `v`.
    pub fn nabla_jacobi<T: Scalar>(&self, t1: &TangentVec<T>, t2: &TangentVec<T>) -> Result<TangentVec<T>> {
        self.check(t1)?;
        self.check(t2)?;
        let (vv, yy, u) = (&t1.v, &t1.y, &t2.v);
        let jy_v = self.j(yy, vv);
        let uv = self.bracket_vv(u, vv);
        let u_jyv = self.bracket_vv(u, &jy_v);
        let mut out = self.j(&uv, &jy_v);
        out = linalg::add(&out, &self.j(&u_jyv, vv));
        out = linalg::axpy(&out, &-dot(u, vv), &jy_v);
        out = linalg::axpy(&out, &-dot(u, &jy_v), vv);
        let c = T::ratio(3, 2);
        Ok(self.from_v(linalg::scale(&c, &out)))
    }

    /// Sectional curvature of `span(T1, T2)` via the Jacobi operator and the
    /// Gram determinant.
    pub fn sectional<T: Scalar>(&self, t1: &TangentVec<T>, t2: &TangentVec<T>) -> Result<T> {
        self.check(t1)?;
        self.check(t2)?;
        let gram = t1.norm2() * t2.norm2() - t1.dot(t2) * t1.dot(t2);
        let scale = t1.norm2().to_f64() * t2.norm2().to_f64();
        if gram.is_negligible(1e-14 * scale) {
            return Err(Error::DegeneratePlane);
        }
        Ok(self.jacobi_apply(t1, t2).dot(t2) / gram)
    }

    /// Closed form for orthonormal `T1 = V + Y + sA`, `T2 = U + X` (no
    /// `A`-component in `T2`).
    pub fn sectional_closed_form<T: Scalar>(&self, t1: &TangentVec<T>, t2: &TangentVec<T>) -> Result<T> {
        self.check(t1)?;
        self.check(t2)?;
        if !t2.s.is_negligible(1e-14) {
            return Err(Error::ExcludedCase("second vector must have no A-component"));
        }
        let q = |n: i64| T::ratio(n, 4);
        let (vv, yy, s) = (&t1.v, &t1.y, &t1.s);
        let (u, x) = (&t2.v, &t2.y);
        let sx_uv = linalg::sub(&linalg::scale(s, x), &self.bracket_vv(u, vv));
        let xy = dot(x, yy);
        let inner = T::from_i64(3) * norm2(x) * norm2(yy)
            + T::from_i64(6) * dot(&self.j(x, u), &self.j(yy, vv))
            + T::one();
        Ok(-q(3) * norm2(&sx_uv) - q(3) * xy.clone() * xy - q(1) * inner)
    }

    /// `K_{V,Y}` scaled by `|Y|`: the exact operator `X ↦ |V|^{-2} [V, J_X J_Y V]`
    /// on all of `z`. It annihilates `Y` and preserves `Y^⊥ ∩ z`.
    pub fn k_operator<T: Scalar>(&self, v: &[T], y: &[T]) -> Result<KOperator<T>> {
        if linalg::is_zero_vec(v, 0.0) {
            return Err(Error::ZeroVector("V"));
        }
        if linalg::is_zero_vec(y, 0.0) {
            return Err(Error::ZeroVector("Y"));
        }
        let nv = norm2(v);
        let jy_v = self.j(y, v);
        let cols: Vec<Vec<T>> = (0..self.m())
            .map(|k| {
                let mut e = vec![T::zero(); self.m()];
                e[k] = T::one();
                let w = self.j(&e, &jy_v);
                linalg::scale(&(T::one() / nv.clone()), &self.bracket_vv(v, &w))
            })
            .collect();
        Ok(KOperator { scaled: Mat::from_columns(&cols), y_norm2: norm2(y) })
    }

    /// Trace statistics of `R_T` and `R_T^2` over seeded random unit vectors.
    pub fn two_stein_probe(&self, samples: usize, seed: u64) -> TwoSteinProbe {
        assert!(samples >= 2, "need at least two samples");
        let stats: Vec<(f64, f64)> = (0..samples)
            .map(|i| {
                let mut rng = SampleRng::new(seed, i as u64);
                let t = TangentVec::from_flat(&rng.unit_vec(self.dim_s()), self.dim_v());
                let r = self.jacobi_op(&t).expect("sampled vector has the right shape");
                (r.trace(), r.entries().map(|x| x * x).sum())
            })
            .collect();
        let n = samples as f64;
        let c1 = stats.iter().map(|s| s.0).sum::<f64>() / n;
        let c2 = stats.iter().map(|s| s.1).sum::<f64>() / n;
        TwoSteinProbe {
            c1,
            c2,
            maxdev_trace: stats.iter().map(|s| (s.0 - c1).abs()).fold(0.0, f64::max),
            maxdev_trace_sq: stats.iter().map(|s| (s.1 - c2).abs()).fold(0.0, f64::max),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSteinProbe {
    pub c1: f64,
    pub c2: f64,
    pub maxdev_trace: f64,
    pub maxdev_trace_sq: f64,
}

/// `|Y| K_{V,Y}` as an `m x m` matrix on `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct KOperator<T> {
    pub scaled: Mat<T>,
    pub y_norm2: T,
}

impl<T: Scalar> KOperator<T> {
    /// `|Y|^2 K^2`, exact.
    pub fn scaled_square(&self) -> Mat<T> {
        self.scaled.matmul(&self.scaled)
    }
}

impl KOperator<f64> {
    /// `K` itself.
    pub fn matrix(&self) -> Mat<f64> {
        self.scaled.scale(&(1.0 / libm::sqrt(self.y_norm2)))
    }

    /// Eigenvalues of `K^2` restricted to `Y^⊥ ∩ z`, ascending.
    pub fn k2_spectrum_on_complement(&self, y: &[f64]) -> Vec<f64> {
        let comp = complement_basis(y);
        let k = self.matrix();
        let k2 = k.matmul(&k);
        let restricted = Mat::from_fn(comp.len(), comp.len(), |i, j| dot(&comp[i], &k2.apply(&comp[j])));
        linalg::sym_eigen(&restricted).values
    }
}

/// Orthonormal basis of `y^⊥` in its ambient coordinate space.
pub fn complement_basis(y: &[f64]) -> Vec<Vec<f64>> {
    let n = y.len();
    let mut seeds = vec![y.to_vec()];
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        seeds.push(e);
    }
    let mut b = linalg::orthonormalize(&seeds, 1e-10);
    b.remove(0);
    b
}
