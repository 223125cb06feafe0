//! Octonions and the curvature tensor of the Cayley projective plane
//! (`ε = +1`) and the Cayley hyperbolic plane (`ε = -1`) at a point.
//!
//! Multiplication is Cayley-Dickson doubling applied three times to the
//! reals, with the convention
//!
//! ```text
//! (a, b)(c, d) = (ac - d* b, da + b c*),    (a, b)* = (a*, -b).
//! ```
//!
//! The first Bianchi identity for [`cayley_curvature`] holds exactly with
//! this convention, which is how the table was fixed.

use alloc::vec;
use alloc::vec::Vec;

use crate::curvature::CurvatureModel;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, Mat};
use crate::sampling::SampleRng;
use crate::scalar::Scalar;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct Octonion<T>(pub [T; 8]);

fn cd_conj<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut out: Vec<T> = x.iter().map(|c| -c.clone()).collect();
    out[0] = x[0].clone();
    out
}

fn cd_mul<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    if n == 1 {
        return vec![x[0].clone() * y[0].clone()];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let first = linalg::sub(&cd_mul(a, c), &cd_mul(&cd_conj(d), b));
    let second = linalg::add(&cd_mul(d, a), &cd_mul(b, &cd_conj(c)));
    let mut out = first;
    out.extend(second);
    out
}

impl<T: Scalar> Octonion<T> {
    pub fn from_slice(x: &[T]) -> Self {
        assert_eq!(x.len(), 8, "octonions have 8 coordinates");
        Octonion(core::array::from_fn(|i| x[i].clone()))
    }

    pub fn zero() -> Self {
        Octonion(core::array::from_fn(|_| T::zero()))
    }

    pub fn one() -> Self {
        Self::unit(0)
    }

    /// `1` for `k = 0`, `e_k` for `k = 1..=7`.
    pub fn unit(k: usize) -> Self {
        Octonion(core::array::from_fn(|i| if i == k { T::one() } else { T::zero() }))
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn conj(&self) -> Self {
        Self::from_slice(&cd_conj(&self.0))
    }

    pub fn dot(&self, other: &Self) -> T {
        dot(&self.0, &other.0)
    }

    pub fn norm2(&self) -> T {
        self.dot(self)
    }

    /// `<a, 1>`.
    pub fn real(&self) -> T {
        self.0[0].clone()
    }

    pub fn is_imaginary(&self) -> bool {
        self.0[0].is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_slice(&linalg::add(&self.0, &other.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_slice(&linalg::sub(&self.0, &other.0))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_slice(&linalg::scale(c, &self.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        oct_mul(self, other)
    }
}

pub fn oct_mul<T: Scalar>(a: &Octonion<T>, b: &Octonion<T>) -> Octonion<T> {
    Octonion::from_slice(&cd_mul(&a.0, &b.0))
}

/// Matrix of `x ↦ ax`.
pub fn left_mul_operator<T: Scalar>(a: &Octonion<T>) -> Mat<T> {
    let cols: Vec<Vec<T>> = (0..8).map(|k| oct_mul(a, &Octonion::unit(k)).0.to_vec()).collect();
    Mat::from_columns(&cols)
}

/// Matrix of `x ↦ xa`.
pub fn right_mul_operator<T: Scalar>(a: &Octonion<T>) -> Mat<T> {
    let cols: Vec<Vec<T>> = (0..8).map(|k| oct_mul(&Octonion::unit(k), a).0.to_vec()).collect();
    Mat::from_columns(&cols)
}

/// A maximal isotropic subspace for the skew form `(d, f) ↦ <a d, f>`, `a`
/// imaginary and nonzero: greedily pick basis vectors orthogonal to all
/// previous `d_j` and `a d_j`. Returns an orthogonal basis.
pub fn isotropic_subspace<T: Scalar>(a: &Octonion<T>) -> Result<Vec<Octonion<T>>> {
    if !a.is_imaginary() || a.norm2().is_zero() {
        return Err(Error::Precondition("a must be a nonzero imaginary octonion".into()));
    }
    let mut taken: Vec<Vec<T>> = Vec::new();
    let mut chosen = Vec::new();
    for k in 0..8 {
        let r = linalg::residual_against(&taken, &Octonion::<T>::unit(k).0);
        if linalg::is_zero_vec(&r, 1e-12) {
            continue;
        }
        let d = Octonion::from_slice(&r);
        let ad = oct_mul(a, &d).0.to_vec();
        taken.push(r);
        let ad_r = linalg::residual_against(&taken, &ad);
        taken.push(ad_r);
        chosen.push(d);
    }
    Ok(chosen)
}

/// `n - rank/2` for a skew bilinear form with Gram matrix `m`.
pub fn max_isotropic_dim<T: Scalar>(m: &Mat<T>, tol: f64) -> usize {
    m.rows() - m.rank(tol) / 2
}

#[derive(Clone, Debug, PartialEq)]
pub struct CayleyTangent<T> {
    pub a: Octonion<T>,
    pub b: Octonion<T>,
    pub eps: i64,
}

impl<T: Scalar> CayleyTangent<T> {
    pub fn new(a: Octonion<T>, b: Octonion<T>, eps: i64) -> Self {
        CayleyTangent { a, b, eps }
    }

    pub fn from_flat(x: &[T], eps: i64) -> Self {
        CayleyTangent { a: Octonion::from_slice(&x[..8]), b: Octonion::from_slice(&x[8..16]), eps }
    }

    pub fn to_flat(&self) -> Vec<T> {
        let mut out = self.a.0.to_vec();
        out.extend(self.b.0.iter().cloned());
        out
    }

    /// `ξ = (1, 0)`.
    pub fn xi(eps: i64) -> Self {
        CayleyTangent { a: Octonion::one(), b: Octonion::zero(), eps }
    }

    pub fn dot(&self, other: &Self) -> T {
        self.a.dot(&other.a) + self.b.dot(&other.b)
    }
}

fn check_eps(eps: i64) -> Result<()> {
    if eps == 1 || eps == -1 {
        Ok(())
    } else {
        Err(Error::Precondition(alloc::format!("epsilon must be ±1, got {eps}")))
    }
}

/// `R((a,b),(c,d))(e,f)`.
pub fn cayley_curvature<T: Scalar>(
    x: &CayleyTangent<T>,
    y: &CayleyTangent<T>,
    z: &CayleyTangent<T>,
) -> Result<CayleyTangent<T>> {
    if x.eps != y.eps || y.eps != z.eps {
        return Err(Error::SignMismatch);
    }
    check_eps(x.eps)?;
    let (a, b) = (&x.a, &x.b);
    let (c, d) = (&y.a, &y.b);
    let (e, f) = (&z.a, &z.b);
    let four = T::from_i64(4);
    let ad_cb = a.mul(d).sub(&c.mul(b));
    let first = a
        .scale(&(four.clone() * c.dot(e)))
        .sub(&c.scale(&(four.clone() * a.dot(e))))
        .add(&e.mul(d).mul(&b.conj()))
        .sub(&e.mul(b).mul(&d.conj()))
        .add(&ad_cb.mul(&f.conj()));
    let second = b
        .scale(&(four.clone() * d.dot(f)))
        .sub(&d.scale(&(four * b.dot(f))))
        .add(&a.conj().mul(&c.mul(f)))
        .sub(&c.conj().mul(&a.mul(f)))
        .sub(&e.conj().mul(&ad_cb));
    let k = T::ratio(x.eps, 4);
    Ok(CayleyTangent { a: first.scale(&k), b: second.scale(&k), eps: x.eps })
}

/// `OP^2` (`eps = 1`) or `OH^2` (`eps = -1`) as a curvature model on
/// flat 16-vectors `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CayleyPlane {
    pub eps: i64,
}

impl CayleyPlane {
    pub fn new(eps: i64) -> Result<Self> {
        check_eps(eps)?;
        Ok(CayleyPlane { eps })
    }
}

impl<T: Scalar> CurvatureModel<T> for CayleyPlane {
    fn dim(&self) -> usize {
        16
    }

    fn curvature(&self, x: &[T], y: &[T], z: &[T]) -> Vec<T> {
        let t = |v: &[T]| CayleyTangent::from_flat(v, self.eps);
        cayley_curvature(&t(x), &t(y), &t(z)).expect("same epsilon by construction").to_flat()
    }
}

/// `R(X,Y)Z + R(Y,Z)X + R(Z,X)Y`.
pub fn bianchi_residual<T: Scalar>(
    x: &CayleyTangent<T>,
    y: &CayleyTangent<T>,
    z: &CayleyTangent<T>,
) -> Result<Vec<T>> {
    let r1 = cayley_curvature(x, y, z)?.to_flat();
    let r2 = cayley_curvature(y, z, x)?.to_flat();
    let r3 = cayley_curvature(z, x, y)?.to_flat();
    Ok(linalg::add(&linalg::add(&r1, &r2), &r3))
}

/// Sectional curvature of `span(X, Y)` in floating point.
pub fn sectional(plane: &CayleyPlane, x: &[f64], y: &[f64]) -> Result<f64> {
    let gram = dot(x, x) * dot(y, y) - dot(x, y) * dot(x, y);
    if gram.abs() < 1e-14 * dot(x, x) * dot(y, y) {
        return Err(Error::DegeneratePlane);
    }
    Ok(plane.curvature4(y, x, x, y) / gram)
}

/// Minimum and maximum of sectional curvature over seeded random planes.
pub fn sectional_range(plane: &CayleyPlane, samples: usize, seed: u64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..samples {
        let mut rng = SampleRng::new(seed, i as u64);
        let x = rng.gaussian_vec(16);
        let y = rng.gaussian_vec(16);
        if let Ok(k) = sectional(plane, &x, &y) {
            lo = lo.min(k);
            hi = hi.max(k);
        }
    }
    (lo, hi)
}

/// Seeded rational samples from `L_ε = {(a, 0) : a ⊥ 1}`.
fn sample_l_eps(rng: &mut SampleRng, eps: i64) -> CayleyTangent<crate::BigRational> {
    let mut a = rng.rational_vec(8, 5, 4);
    a[0] = crate::rat(0, 1);
    CayleyTangent::new(Octonion::from_slice(&a), Octonion::zero(), eps)
}

/// Seeded rational samples from `L_{ε/4} = {(0, b)}`.
fn sample_l_quarter(rng: &mut SampleRng, eps: i64) -> CayleyTangent<crate::BigRational> {
    CayleyTangent::new(Octonion::zero(), Octonion::from_slice(&rng.rational_vec(8, 5, 4)), eps)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerpXiReport {
    /// Largest `|<R(X,Y)Z, ξ>|` for `X, Y, Z ∈ L_ε`.
    pub eps_eps_eps: f64,
    /// Same for `X ∈ L_{ε/4}`, `Y, Z ∈ L_ε`.
    pub quarter_eps_eps: f64,
    /// Same for `X, Y, Z ∈ L_{ε/4}`.
    pub quarter_quarter_quarter: f64,
    /// Control: `X ∈ L_ε`, `Y, Z ∈ L_{ε/4}`, which is not orthogonal to `ξ`
    /// in general.
    pub control: f64,
    /// All three orthogonalities vanish exactly in rational arithmetic.
    pub exact: bool,
}

/// Orthogonality to `ξ = (1, 0)` of curvature triples from the eigenspaces of
/// `R_ξ`, on seeded rational samples.
pub fn perp_xi_checks(eps: i64, samples: usize, seed: u64) -> Result<PerpXiReport> {
    check_eps(eps)?;
    let xi = CayleyTangent::<crate::BigRational>::xi(eps);
    let pair = |x: &CayleyTangent<_>, y: &CayleyTangent<_>, z: &CayleyTangent<_>| {
        cayley_curvature(x, y, z).map(|r| r.dot(&xi))
    };
    let mut rep = PerpXiReport {
        eps_eps_eps: 0.0,
        quarter_eps_eps: 0.0,
        quarter_quarter_quarter: 0.0,
        control: 0.0,
        exact: true,
    };
    for i in 0..samples {
        let mut rng = SampleRng::new(seed, i as u64);
        let (e1, e2, e3) = (sample_l_eps(&mut rng, eps), sample_l_eps(&mut rng, eps), sample_l_eps(&mut rng, eps));
        let (q1, q2, q3) =
            (sample_l_quarter(&mut rng, eps), sample_l_quarter(&mut rng, eps), sample_l_quarter(&mut rng, eps));
        let v1 = pair(&e1, &e2, &e3)?;
        let v2 = pair(&q1, &e1, &e2)?;
        let v3 = pair(&q1, &q2, &q3)?;
        let c = pair(&e1, &q1, &q2)?;
        rep.exact &= v1.is_zero() && v2.is_zero() && v3.is_zero();
        rep.eps_eps_eps = rep.eps_eps_eps.max(v1.to_f64().abs());
        rep.quarter_eps_eps = rep.quarter_eps_eps.max(v2.to_f64().abs());
        rep.quarter_quarter_quarter = rep.quarter_quarter_quarter.max(v3.to_f64().abs());
        rep.control = rep.control.max(c.to_f64().abs());
    }
    Ok(rep)
}

/// Matrix of `R_ξ` on `O ⊕ O` for `ξ = (1, 0)`.
pub fn jacobi_xi<T: Scalar>(eps: i64) -> Result<Mat<T>> {
    let plane = CayleyPlane::new(eps)?;
    Ok(CurvatureModel::<T>::jacobi_matrix(&plane, &CayleyTangent::<T>::xi(eps).to_flat()))
}
