//! Principal-curvature algebra for Einstein hypersurfaces of the Cayley
//! plane: the Gauss system, the finite set of admissible mean curvatures,
//! the two surviving multiplicity patterns, the differentiated Gauss system,
//! and the geodesic sphere that realizes the only solution.
//!
//! The unit normal is `ξ`; `R_ξ` has eigenvalue `ε` on a 7-dimensional and
//! `ε/4` on an 8-dimensional subspace of the tangent space, and the Gauss
//! equation reads `-λ_i^2 + H λ_i + C = (ε or ε/4)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{rat, Scalar};
use crate::surd::QuadSurd;
use crate::BigRational;
use num_traits::Zero;

/// Multiplicities of the two eigenvalues of `R_ξ` on the tangent space.
pub const MULT_EPS: usize = 7;
pub const MULT_QUARTER: usize = 8;

fn check_eps(eps: i64) -> Result<()> {
    if eps == 1 || eps == -1 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("epsilon must be ±1, got {eps}")))
    }
}

/// Jacobi eigenvalue attached to the `i`-th principal direction.
pub fn jacobi_eigenvalue<T: Scalar>(eps: i64, i: usize) -> T {
    if i < MULT_EPS {
        T::from_i64(eps)
    } else {
        T::ratio(eps, 4)
    }
}

/// `Tr R_ξ` restricted to the hypersurface, `7ε + 8ε/4`.
pub fn jacobi_trace<T: Scalar>(eps: i64) -> T {
    (0..MULT_EPS + MULT_QUARTER).fold(T::zero(), |acc, i| acc + jacobi_eigenvalue::<T>(eps, i))
}

/// Principal data at a point. The first seven curvatures pair with the
/// Jacobi eigenvalue `ε`, the last eight with `ε/4`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceData<T> {
    pub eps: i64,
    pub lambdas: Vec<T>,
    pub h: T,
    /// Difference of the Einstein constants of the ambient space and of the
    /// hypersurface.
    pub c: T,
}

impl<T: Scalar> HypersurfaceData<T> {
    pub fn new(eps: i64, lambdas: Vec<T>, c: T) -> Result<Self> {
        check_eps(eps)?;
        if lambdas.len() != MULT_EPS + MULT_QUARTER {
            return Err(Error::DimensionMismatch { expected: MULT_EPS + MULT_QUARTER, got: lambdas.len() });
        }
        let h = lambdas.iter().cloned().fold(T::zero(), |a, b| a + b);
        Ok(HypersurfaceData { eps, lambdas, h, c })
    }

    /// Block form: `(value, multiplicity)` pairs for the `ε` block followed by
    /// those of the `ε/4` block; `C` is taken from the first `ε`-block value.
    pub fn from_blocks(eps: i64, eps_block: &[(T, usize)], quarter_block: &[(T, usize)]) -> Result<Self> {
        let expand = |blocks: &[(T, usize)], want: usize| -> Result<Vec<T>> {
            let out: Vec<T> = blocks.iter().flat_map(|(v, k)| core::iter::repeat_n(v.clone(), *k)).collect();
            if out.len() != want {
                return Err(Error::DimensionMismatch { expected: want, got: out.len() });
            }
            Ok(out)
        };
        let mut lambdas = expand(eps_block, MULT_EPS)?;
        lambdas.extend(expand(quarter_block, MULT_QUARTER)?);
        let h = lambdas.iter().cloned().fold(T::zero(), |a, b| a + b);
        let l1 = lambdas[0].clone();
        let c = T::from_i64(eps) + l1.clone() * l1.clone() - h * l1;
        Self::new(eps, lambdas, c)
    }
}

/// Largest `|-λ_i^2 + H λ_i + C - (ε or ε/4)|`, as an exact value when `T`
/// is exact.
pub fn gauss_einstein_residual<T: Scalar>(h: &HypersurfaceData<T>) -> T {
    let mut worst = T::zero();
    for (i, l) in h.lambdas.iter().enumerate() {
        let r = -(l.clone() * l.clone()) + h.h.clone() * l.clone() + h.c.clone() - jacobi_eigenvalue::<T>(h.eps, i);
        let r = if r.to_f64() < 0.0 { -r } else { r };
        if r.to_f64() > worst.to_f64() || (worst.is_zero() && !r.is_zero()) {
            worst = r;
        }
    }
    worst
}

/// One admissible value of the mean curvature for a sign pattern
/// `(q_1, q_2, q_3, q_4)`: `q_1` curvatures take the `+` root and `q_2` the
/// `-` root in the `ε` block, likewise `q_3`, `q_4` in the `ε/4` block.
#[derive(Clone, Debug, PartialEq)]
pub struct HSolution {
    pub h: f64,
    pub q: [usize; 4],
    pub lambdas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HRejection {
    pub h: f64,
    pub q: [usize; 4],
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct HEnumeration {
    pub solutions: Vec<HSolution>,
    pub rejected: Vec<HRejection>,
    /// Sign patterns for which the cleared equation degenerates to `0 = 0`.
    pub identically_satisfied: Vec<[usize; 4]>,
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return vec![];
    }
    if a.abs() <= 1e-14 * scale {
        if b.abs() <= 1e-14 * scale {
            return vec![];
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-12 * b * b.max(1.0) {
        return vec![];
    }
    let sq = libm::sqrt(disc.max(0.0));
    // numerically stable pair
    let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    let mut out = vec![];
    if q != 0.0 {
        out.push(q / a);
        out.push(c / q);
    } else {
        out.push(0.0);
    }
    out
}

/// All mean curvatures `H` compatible with the Gauss system for given `ε`
/// and `C`: for each sign pattern, `13H = a√(H²+P) + b√(H²+R)` with
/// `a = q_2 - q_1`, `b = q_4 - q_3`, `P = 4C - 4ε`, `R = 4C - ε`. Squaring
/// twice gives a quadratic in `u = H²`; every root is checked against the
/// original equation and spurious ones are kept with a reason.
pub fn enumerate_h(eps: i64, c: f64) -> Result<HEnumeration> {
    check_eps(eps)?;
    let e = eps as f64;
    let p = 4.0 * c - 4.0 * e;
    let r = 4.0 * c - e;
    let mut out = HEnumeration::default();
    for q1 in 0..=MULT_EPS {
        for q3 in 0..=MULT_QUARTER {
            let q = [q1, MULT_EPS - q1, q3, MULT_QUARTER - q3];
            let a = q[1] as f64 - q[0] as f64;
            let b = q[3] as f64 - q[2] as f64;
            let k = 169.0 - a * a - b * b;
            let mm = a * a * p + b * b * r;
            let ab4 = 4.0 * a * a * b * b;
            let c2 = k * k - ab4;
            let c1 = -(2.0 * k * mm + ab4 * (p + r));
            let c0 = mm * mm - ab4 * p * r;
            if c2 == 0.0 && c1 == 0.0 && c0 == 0.0 {
                out.identically_satisfied.push(q);
                continue;
            }
            let mut hs: Vec<f64> = Vec::new();
            for u in quadratic_roots(c2, c1, c0) {
                if u < -1e-12 {
                    out.rejected.push(HRejection { h: f64::NAN, q, reason: format!("H^2 = {u} < 0") });
                    continue;
                }
                let s = libm::sqrt(u.max(0.0));
                for h in [s, -s] {
                    if !hs.iter().any(|x| (x - h).abs() <= 1e-12 * (1.0 + h.abs())) {
                        hs.push(h);
                    }
                }
            }
            for h in hs {
                let (rp, rr) = (h * h + p, h * h + r);
                if rp < -1e-12 || rr < -1e-12 {
                    out.rejected.push(HRejection { h, q, reason: "complex principal curvature".into() });
                    continue;
                }
                let (sp, sr) = (libm::sqrt(rp.max(0.0)), libm::sqrt(rr.max(0.0)));
                let defect = 13.0 * h - a * sp - b * sr;
                let scale = 13.0 * h.abs() + a.abs() * sp + b.abs() * sr;
                if defect.abs() > 1e-9 * scale.max(1.0) {
                    out.rejected
                        .push(HRejection { h, q, reason: format!("radical sign mismatch, defect {defect:e}") });
                    continue;
                }
                let mut lambdas = Vec::with_capacity(15);
                lambdas.extend(core::iter::repeat_n(0.5 * (h + sp), q[0]));
                lambdas.extend(core::iter::repeat_n(0.5 * (h - sp), q[1]));
                lambdas.extend(core::iter::repeat_n(0.5 * (h + sr), q[2]));
                lambdas.extend(core::iter::repeat_n(0.5 * (h - sr), q[3]));
                out.solutions.push(HSolution { h, q, lambdas });
            }
        }
    }
    Ok(out)
}

/// One branch of a solved multiplicity case, tagged by the normal
/// orientation `ε'`.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseBranch {
    pub eps_prime: i64,
    /// `α_1, α_3` and, for the `(7, 7, 1)` case, `α_4`.
    pub alphas: Vec<QuadSurd>,
    pub h: QuadSurd,
    pub c: QuadSurd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseSolution {
    pub eps: i64,
    /// `α_1^2` before taking square roots; negative means no real branch.
    pub alpha1_sq: BigRational,
    /// Empty when `α_1^2 < 0`.
    pub branches: Vec<CaseBranch>,
}

/// Solves a linear system with `α_1 = 1` fixed for the remaining unknowns.
fn unit_ratios(rows: &[Vec<BigRational>], rhs: &[BigRational]) -> Result<Vec<BigRational>> {
    Mat::from_rows(rows).solve(rhs, 0.0).ok_or(Error::DegenerateSystem("linear relations between block values"))
}

/// `(α_3 - α_1)(α_3 + α_1 - H) = 3ε/4` in terms of ratios to `α_1`.
fn alpha1_squared(eps: i64, r3: &BigRational, rh: &BigRational) -> Result<BigRational> {
    let one = rat(1, 1);
    let coeff = (r3.clone() - one.clone()) * (r3.clone() + one - rh.clone());
    if coeff.is_zero() {
        return Err(Error::DegenerateSystem("eliminated quadratic has zero coefficient"));
    }
    Ok(rat(3 * eps, 4) / coeff)
}

fn branches(eps: i64, a1_sq: &BigRational, ratios: &[BigRational], rh: &BigRational) -> Vec<CaseBranch> {
    let Some(root) = QuadSurd::sqrt_of(a1_sq) else {
        return vec![];
    };
    [1i64, -1]
        .into_iter()
        .map(|eps_prime| {
            // ε' = +1 is the orientation with α_1 < 0.
            let a1 = if eps_prime == 1 { -root.clone() } else { root.clone() };
            let times = |r: &BigRational| a1.clone() * QuadSurd::rational(r.clone());
            let mut alphas = vec![a1.clone()];
            alphas.extend(ratios.iter().map(times));
            let h = times(rh);
            let c = QuadSurd::from_i64(eps) + a1.clone() * a1.clone() - h.clone() * a1;
            CaseBranch { eps_prime, alphas, h, c }
        })
        .collect()
}

/// Multiplicities `(p_1, p_3) = (7, 8)`: `α_1 = 2α_3 + H`, `H = 7α_1 + 8α_3`.
pub fn solve_case_78(eps: i64) -> Result<CaseSolution> {
    check_eps(eps)?;
    // unknowns (α_3, H) with α_1 = 1:  2α_3 + H = 1,  8α_3 - H = -7
    let rows = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(8, 1), rat(-1, 1)]];
    let sol = unit_ratios(&rows, &[rat(1, 1), rat(-7, 1)])?;
    let (r3, rh) = (sol[0].clone(), sol[1].clone());
    let a1_sq = alpha1_squared(eps, &r3, &rh)?;
    let branches = branches(eps, &a1_sq, &[r3], &rh);
    Ok(CaseSolution { eps, alpha1_sq: a1_sq, branches })
}

/// Multiplicities `(p_1, p_3, p_4) = (7, 7, 1)`: `α_1 = 2α_3 + H`,
/// `H = 7α_1 + 7α_3 + α_4`, and `α_3 + α_4 = H` since both solve the `ε/4`
/// Gauss equation.
pub fn solve_case_717(eps: i64) -> Result<CaseSolution> {
    check_eps(eps)?;
    // unknowns (α_3, α_4, H) with α_1 = 1
    let rows = vec![
        vec![rat(2, 1), rat(0, 1), rat(1, 1)],
        vec![rat(7, 1), rat(1, 1), rat(-1, 1)],
        vec![rat(1, 1), rat(1, 1), rat(-1, 1)],
    ];
    let sol = unit_ratios(&rows, &[rat(1, 1), rat(-7, 1), rat(0, 1)])?;
    let (r3, r4, rh) = (sol[0].clone(), sol[1].clone(), sol[2].clone());
    let a1_sq = alpha1_squared(eps, &r3, &rh)?;
    let branches = branches(eps, &a1_sq, &[r3, r4], &rh);
    Ok(CaseSolution { eps, alpha1_sq: a1_sq, branches })
}

/// Coefficients of `(<∇_k X_i, X_j>, <∇_i X_j, X_k>, <∇_j X_k, X_i>)` in the
/// differentiated Gauss equation for principal curvatures `(λ_i, λ_j, λ_k)`.
pub fn difgauss_row<T: Scalar>(li: &T, lj: &T, lk: &T, h: &T) -> [T; 3] {
    let two = T::from_i64(2);
    [
        (li.clone() - lj.clone()) * (li.clone() + lj.clone() - two * lk.clone() - h.clone()),
        lk.clone() * (lj.clone() - lk.clone()),
        lk.clone() * (lk.clone() - li.clone()),
    ]
}

/// Linear system for `(<∇_Z X, Y>, <∇_X Y, Z>, <∇_Y Z, X>)` with
/// `X ∈ E_1`, `Y ∈ E_3`, `Z ∈ E_4`, from the substitutions
/// `(X, Y, Z)`, `(Z, X, Y)`, `(Y, Z, X)` in that row order.
pub fn difgauss_system<T: Scalar>(a1: &T, a3: &T, a4: &T, h: &T) -> Result<Mat<T>> {
    if a1 == a3 || a3 == a4 || a1 == a4 {
        return Err(Error::DegenerateSystem("block values must be pairwise distinct"));
    }
    // substitution (X,Y,Z): unknown order matches the row directly
    let r1 = difgauss_row(a1, a3, a4, h);
    // (Z,X,Y): row terms are (<∇_Y Z,X>, <∇_Z X,Y>, <∇_X Y,Z>)
    let [u3, u1, u2] = difgauss_row(a4, a1, a3, h);
    let r2 = [u1, u2, u3];
    // (Y,Z,X): row terms are (<∇_X Y,Z>, <∇_Y Z,X>, <∇_Z X,Y>)
    let [w2, w3, w1] = difgauss_row(a3, a4, a1, h);
    let r3 = [w1, w2, w3];
    Ok(Mat::from_rows(&[r1.to_vec(), r2.to_vec(), r3.to_vec()]))
}

/// Coefficient of `w = <∇_k X_j, X_i>` once `λ_k = λ_j` and the symmetries
/// `<∇_k X_i, X_j> = -w`, `<∇_j X_k, X_i> = -w` are inserted into the
/// differentiated Gauss row.
pub fn alphalpha_coefficient<T: Scalar>(li: &T, lj: &T, h: &T) -> T {
    let [c1, _c2, c3] = difgauss_row(li, lj, lj, h);
    -(c1 + c3)
}

/// Right-hand side of the Codazzi equation for `R(X_k, X_i, X_j, ξ)`, given
/// `nabla_ki_j = <∇_k X_i, X_j>` and `nabla_ik_j = <∇_i X_k, X_j>`.
pub fn codazzi_rhs<T: Scalar>(li: &T, lj: &T, lk: &T, nabla_ki_j: &T, nabla_ik_j: &T) -> T {
    (li.clone() - lj.clone()) * nabla_ki_j.clone() - (lk.clone() - lj.clone()) * nabla_ik_j.clone()
}

/// The matrix printed for the `(7, 7, 1)` case: integer entries in factored
/// form with the prefactor `1/(4·91)^3`.
pub fn printed_q() -> (BigRational, [[(i64, i64); 3]; 3]) {
    let pref = rat(1, 364 * 364) / rat(364, 1);
    let entries = [[(-75, 13), (-27, 34), (27, 21)], [(6, 13), (12, 34), (6, 21)], [(-7, 13), (7, 34), (27, 21)]];
    (pref, entries)
}

/// Determinant reported alongside the printed matrix.
pub fn quoted_det_q() -> BigRational {
    rat(-39051, 16562)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QAnalysis {
    /// Differentiated Gauss system in the printed row order
    /// (substitutions one, three, two), evaluated at the `ε' = +1` branch.
    pub q: Mat<BigRational>,
    pub det_q: BigRational,
    /// The printed integer matrix without its prefactor.
    pub printed_integer: Mat<BigRational>,
    /// `q = printed_integer * scale`.
    pub scale: BigRational,
    /// Determinant of the printed matrix taken literally, prefactor included.
    pub det_printed_literal: BigRational,
    pub det_quoted: BigRational,
}

/// Builds the differentiated Gauss system from the solved `(7, 7, 1)` values
/// and compares it with the printed matrix and determinant.
pub fn analyze_q() -> Result<QAnalysis> {
    let sol = solve_case_717(1)?;
    let br = sol.branches.first().ok_or(Error::DegenerateSystem("no real (7,7,1) branch"))?;
    let sys = difgauss_system(&br.alphas[0], &br.alphas[1], &br.alphas[2], &br.h)?;
    let to_rat = |x: &QuadSurd| -> Result<BigRational> {
        if x.is_rational() {
            Ok(x.rational.clone())
        } else {
            Err(Error::DegenerateSystem("Q entry is irrational"))
        }
    };
    let mut rows = Vec::new();
    for i in [0usize, 2, 1] {
        rows.push(sys.row(i).iter().map(to_rat).collect::<Result<Vec<_>>>()?);
    }
    let q = Mat::from_rows(&rows);
    let (pref, entries) = printed_q();
    let printed_integer = Mat::from_fn(3, 3, |i, j| rat(entries[i][j].0 * entries[i][j].1, 1));
    let scale = q[(0, 0)].clone() / printed_integer[(0, 0)].clone();
    if printed_integer.scale(&scale) != q {
        return Err(Error::DegenerateSystem("printed Q is not proportional to the derived system"));
    }
    let det_q = q.det();
    let det_printed_literal = printed_integer.scale(&pref).det();
    Ok(QAnalysis { q, det_q, printed_integer, scale, det_printed_literal, det_quoted: quoted_det_q() })
}

/// Geodesic sphere of radius `r` in `OP^2` with curvature in `[1/4, 1]`:
/// principal curvature `cot r` on the 7-dimensional `ε`-block and
/// `cot(r/2)/2` on the 8-dimensional `ε/4`-block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereModel {
    pub r: f64,
}

impl SphereModel {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < core::f64::consts::PI) {
            return Err(Error::Precondition(format!("radius {r} outside (0, pi)")));
        }
        Ok(SphereModel { r })
    }

    pub fn principal_curvatures(&self) -> (f64, f64) {
        (1.0 / libm::tan(self.r), 0.5 / libm::tan(0.5 * self.r))
    }

    pub fn mean_curvature(&self) -> f64 {
        let (a, b) = self.principal_curvatures();
        7.0 * a + 8.0 * b
    }

    pub fn to_hypersurface(&self) -> HypersurfaceData<f64> {
        let (a, b) = self.principal_curvatures();
        HypersurfaceData::from_blocks(1, &[(a, MULT_EPS)], &[(b, MULT_QUARTER)]).expect("block sizes are fixed")
    }

    /// Gauss constant of the `ε` block minus that of the `ε/4` block; zero
    /// exactly when the sphere is Einstein.
    pub fn einstein_defect(&self) -> f64 {
        let (a, b) = self.principal_curvatures();
        let h = self.mean_curvature();
        (1.0 + a * a - h * a) - (0.25 + b * b - h * b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereRadius {
    pub r0: f64,
    pub cot_r0: f64,
    /// Sign changes of the defect found on the scan grid.
    pub roots_found: usize,
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Radius of the Einstein geodesic sphere, by scanning `(0, π)` for sign
/// changes of [`SphereModel::einstein_defect`] and bisecting.
pub fn sphere_einstein_radius() -> Result<SphereRadius> {
    let n = 4096;
    let f = |r: f64| SphereModel { r }.einstein_defect();
    let pi = core::f64::consts::PI;
    let grid: Vec<f64> = (1..n).map(|k| pi * k as f64 / n as f64).collect();
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (fa, fb) = (f(w[0]), f(w[1]));
        if fa == 0.0 {
            roots.push(w[0]);
        } else if (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(f, w[0], w[1]));
        }
    }
    match roots.as_slice() {
        [r0] => Ok(SphereRadius { r0: *r0, cot_r0: 1.0 / libm::tan(*r0), roots_found: 1 }),
        [] => Err(Error::NoCommonZero),
        _ => Err(Error::Precondition(format!("expected a single Einstein radius, found {}", roots.len()))),
    }
}

/// Coefficient of the Jacobi field with initial value `X` and initial
/// derivative `-λX` along a geodesic where `R_ξ X = κX`, `κ > 0`.
pub fn jacobi_coefficient(kappa: f64, lambda: f64, r: f64) -> f64 {
    let s = libm::sqrt(kappa);
    libm::cos(s * r) - lambda / s * libm::sin(s * r)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FocalScan {
    pub r: f64,
    pub cot_r: f64,
    pub f1: f64,
    pub f2: f64,
    /// Rank of the differential of the normal exponential map at `r`.
    pub rank: usize,
    /// Smallest rank seen at grid points away from `r`.
    pub min_rank_elsewhere: usize,
}

/// Focal radius of a hypersurface with principal curvatures `α_1` (`×7`,
/// Jacobi eigenvalue 1) and `α_3` (`×8`, eigenvalue 1/4): the first common
/// zero of both Jacobi coefficients on a grid of `n` points in `(0, π)`.
pub fn jacobi_focal_scan(alpha1: f64, alpha3: f64, n: usize, tol: f64) -> Result<FocalScan> {
    let f1 = |r: f64| jacobi_coefficient(1.0, alpha1, r);
    let f2 = |r: f64| jacobi_coefficient(0.25, alpha3, r);
    let rank = |r: f64| {
        let (a, b) = (f1(r), f2(r));
        MULT_EPS * usize::from(a.abs() > tol) + MULT_QUARTER * usize::from(b.abs() > tol)
    };
    let pi = core::f64::consts::PI;
    let grid: Vec<f64> = (1..n.max(3)).map(|k| pi * k as f64 / n.max(3) as f64).collect();
    for w in grid.windows(2) {
        if (f1(w[0]) < 0.0) != (f1(w[1]) < 0.0) {
            let r = bisect(f1, w[0], w[1]);
            if f2(r).abs() <= tol {
                let min_rank_elsewhere =
                    grid.iter().filter(|g| (**g - r).abs() > 1e-6).map(|g| rank(*g)).min().unwrap_or(15);
                return Ok(FocalScan {
                    r,
                    cot_r: 1.0 / libm::tan(r),
                    f1: f1(r),
                    f2: f2(r),
                    rank: rank(r),
                    min_rank_elsewhere,
                });
            }
        }
    }
    Err(Error::NoCommonZero)
}
