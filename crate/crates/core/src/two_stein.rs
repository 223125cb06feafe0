//! Hypersurfaces of 2-stein spaces. For a unit normal `X_n` and a tangent
//! vector `X`, the ambient Jacobi operator along `X + t X_n` is a quadratic
//! polynomial in `t`; the 2-stein conditions `Tr R_Y = c̃_1 |Y|^2` and
//! `Tr R_Y^2 = c̃_2 |Y|^4` then split into one identity per power of `t`.
//!
//! Indices `i, j` run over an orthonormal tangent frame `X_1 .. X_{n-1}`;
//! `B` is the restriction of `R_{X_n}` to the tangent space and `Sh` the
//! shape operator. The intrinsic curvature comes from the Gauss equation
//! `R(X,Y,Z,W) = R̃(X,Y,Z,W) + <Sh X,W><Sh Y,Z> - <Sh X,Z><Sh Y,W>`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::curvature::CurvatureModel;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, Mat};
use crate::scalar::Scalar;

pub use crate::curvature::ConstantCurvature;

/// Ambient model, orthonormal frame (last vector normal), shape operator and
/// the 2-stein constants.
#[derive(Clone, Debug)]
pub struct TwoSteinFrame<T, M> {
    model: M,
    frame: Vec<Vec<T>>,
    sh: Mat<T>,
    b: Mat<T>,
    /// Intrinsic `Tr R_X = c_1 |X|^2`; derived from the traced Gauss
    /// identity when not supplied.
    pub c1: T,
    /// Intrinsic `Tr R_X^2 = c_2 |X|^4` when the hypersurface is 2-stein.
    pub c2: Option<T>,
    pub ct1: T,
    pub ct2: T,
}

fn max_abs_entry<T: Scalar>(m: &Mat<T>) -> f64 {
    m.max_abs()
}

impl<T: Scalar, M: CurvatureModel<T>> TwoSteinFrame<T, M> {
    /// `frame` holds `n` orthonormal ambient vectors, the last one normal;
    /// `sh` is the shape operator in the first `n - 1`.
    pub fn new(model: M, frame: Vec<Vec<T>>, sh: Mat<T>, ct1: T, ct2: T, c1: Option<T>, c2: Option<T>) -> Result<Self> {
        let n = model.dim();
        if frame.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: frame.len() });
        }
        if let Some(v) = frame.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        if sh.rows() != n - 1 || sh.cols() != n - 1 {
            return Err(Error::DimensionMismatch { expected: n - 1, got: sh.rows() });
        }
        let tol = if T::EXACT { 0.0 } else { 1e-12 };
        for (i, a) in frame.iter().enumerate() {
            for (j, b) in frame.iter().enumerate() {
                let target = if i == j { T::one() } else { T::zero() };
                if !(dot(a, b) - target).is_negligible(tol) {
                    return Err(Error::Precondition(format!("frame is not orthonormal at ({i}, {j})")));
                }
            }
        }
        if !sh.is_symmetric(tol) {
            return Err(Error::Precondition("shape operator is not symmetric".into()));
        }
        let xn = frame[n - 1].clone();
        let b = Mat::from_fn(n - 1, n - 1, |i, j| model.curvature4(&frame[i], &xn, &xn, &frame[j]));
        let c1 = match c1 {
            Some(c) => c,
            None => {
                // (n-1) c_1 - (n-2) c̃_1 = (Tr Sh)^2 - Tr Sh^2
                let tr = sh.trace();
                let rhs = tr.clone() * tr - sh.matmul(&sh).trace();
                (T::from_i64(n as i64 - 2) * ct1.clone() + rhs) / T::from_i64(n as i64 - 1)
            }
        };
        Ok(TwoSteinFrame { model, frame, sh, b, c1, c2, ct1, ct2 })
    }

    pub fn n(&self) -> usize {
        self.frame.len()
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn sh(&self) -> &Mat<T> {
        &self.sh
    }

    pub fn b(&self) -> &Mat<T> {
        &self.b
    }

    fn normal(&self) -> &[T] {
        &self.frame[self.n() - 1]
    }

    /// Ambient vector of tangent coordinates `x`.
    pub fn embed(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.n()];
        for (c, e) in x.iter().zip(&self.frame) {
            out = linalg::axpy(&out, c, e);
        }
        out
    }

    fn rt(&self, a: &[T], b: &[T], c: &[T], d: &[T]) -> T {
        self.model.curvature4(a, b, c, d)
    }

    /// Intrinsic `R(X,Y,Z,W)` on tangent coordinates.
    pub fn intrinsic(&self, x: &[T], y: &[T], z: &[T], w: &[T]) -> T {
        let sh = |v: &[T]| self.sh.apply(v);
        self.rt(&self.embed(x), &self.embed(y), &self.embed(z), &self.embed(w)) + dot(&sh(x), w) * dot(&sh(y), z)
            - dot(&sh(x), z) * dot(&sh(y), w)
    }

    fn tangent_unit(&self, i: usize) -> Vec<T> {
        crate::curvature::unit(self.n() - 1, i)
    }

    /// Intrinsic Jacobi operator `R_X` on the tangent space.
    pub fn intrinsic_jacobi(&self, x: &[T]) -> Mat<T> {
        let k = self.n() - 1;
        Mat::from_fn(k, k, |i, j| self.intrinsic(&self.tangent_unit(i), x, x, &self.tangent_unit(j)))
    }

    /// Matrices `M_0, M_1, M_2` with `R̃_{X + t X_n} = M_0 + t M_1 + t^2 M_2`
    /// in the frame, straight from the ambient tensor.
    pub fn jacobi_pencil(&self, x: &[T]) -> [Mat<T>; 3] {
        let n = self.n();
        let xa = self.embed(x);
        let xn = self.normal().to_vec();
        let f = &self.frame;
        let m0 = Mat::from_fn(n, n, |i, j| self.rt(&f[i], &xa, &xa, &f[j]));
        let m1 = Mat::from_fn(n, n, |i, j| self.rt(&f[i], &xa, &xn, &f[j]) + self.rt(&f[i], &xn, &xa, &f[j]));
        let m2 = Mat::from_fn(n, n, |i, j| self.rt(&f[i], &xn, &xn, &f[j]));
        [m0, m1, m2]
    }

    /// The same pencil assembled block by block from the intrinsic curvature,
    /// `Sh` and `B`.
    pub fn jacobi_pencil_from_blocks(&self, x: &[T]) -> [Mat<T>; 3] {
        let n = self.n();
        let k = n - 1;
        let xa = self.embed(x);
        let xn = self.normal().to_vec();
        let f = &self.frame;
        let rx = self.intrinsic_jacobi(x);
        let shx = self.sh.apply(x);
        let q = dot(&shx, x);
        let bx = self.b.apply(x);
        let mut m0 = Mat::zeros(n, n);
        let mut m1 = Mat::zeros(n, n);
        let mut m2 = Mat::zeros(n, n);
        let set = |m: &mut Mat<T>, i: usize, j: usize, v: T| m[(i, j)] = v;
        for i in 0..k {
            for j in 0..k {
                let gauss = q.clone() * self.sh[(i, j)].clone() - shx[i].clone() * shx[j].clone();
                set(&mut m0, i, j, rx[(i, j)].clone() - gauss);
                set(&mut m1, i, j, self.rt(&f[i], &xa, &xn, &f[j]) + self.rt(&f[i], &xn, &xa, &f[j]));
                set(&mut m2, i, j, self.b[(i, j)].clone());
            }
            let a = self.rt(&f[i], &xa, &xa, &xn);
            set(&mut m0, i, k, a.clone());
            set(&mut m0, k, i, a);
            set(&mut m1, i, k, -bx[i].clone());
            set(&mut m1, k, i, -bx[i].clone());
        }
        set(&mut m0, k, k, dot(&bx, x));
        [m0, m1, m2]
    }

    /// Coefficients in `t` of `Tr R̃_{X+tX_n}` (degree 1, three entries) or
    /// `Tr R̃_{X+tX_n}^2` (degree 2, five entries).
    pub fn jacobi_t_expansion(&self, x: &[T], degree: u8) -> Result<Vec<T>> {
        let [m0, m1, m2] = self.jacobi_pencil(x);
        let tr = |a: &Mat<T>, b: &Mat<T>| a.matmul(b).trace();
        match degree {
            1 => Ok(vec![m0.trace(), m1.trace(), m2.trace()]),
            2 => {
                let two = T::from_i64(2);
                Ok(vec![
                    tr(&m0, &m0),
                    two.clone() * tr(&m0, &m1),
                    tr(&m1, &m1) + two.clone() * tr(&m0, &m2),
                    two * tr(&m1, &m2),
                    tr(&m2, &m2),
                ])
            }
            d => Err(Error::Precondition(format!("degree must be 1 or 2, got {d}"))),
        }
    }

    /// What the 2-stein conditions predict for [`Self::jacobi_t_expansion`].
    pub fn expected_expansion(&self, x: &[T], degree: u8) -> Result<Vec<T>> {
        let x2 = dot(x, x);
        let z = T::zero;
        match degree {
            1 => Ok(vec![self.ct1.clone() * x2, z(), self.ct1.clone()]),
            2 => Ok(vec![
                self.ct2.clone() * x2.clone() * x2.clone(),
                z(),
                T::from_i64(2) * self.ct2.clone() * x2,
                z(),
                self.ct2.clone(),
            ]),
            d => Err(Error::Precondition(format!("degree must be 1 or 2, got {d}"))),
        }
    }

    /// `B + Sh^2 - (Tr Sh) Sh - (c̃_1 - c_1) id`.
    pub fn eine3_matrix(&self) -> Mat<T> {
        let k = self.n() - 1;
        let sh2 = self.sh.matmul(&self.sh);
        self.b
            .add(&sh2)
            .sub(&self.sh.scale(&self.sh.trace()))
            .sub(&Mat::identity(k).scale(&(self.ct1.clone() - self.c1.clone())))
    }

    /// `(n-1) c_1 - (n-2) c̃_1 - ((Tr Sh)^2 - Tr Sh^2)`.
    pub fn trace_identity_residual(&self) -> T {
        let n = self.n() as i64;
        let tr = self.sh.trace();
        T::from_i64(n - 1) * self.c1.clone() - T::from_i64(n - 2) * self.ct1.clone()
            - (tr.clone() * tr - self.sh.matmul(&self.sh).trace())
    }

    /// The eight coefficient identities at `X`, each as `lhs - rhs`.
    pub fn coefficient_identities(&self, x: &[T]) -> Vec<Identity<T>> {
        let k = self.n() - 1;
        let xa = self.embed(x);
        let xn = self.normal().to_vec();
        let f = &self.frame[..k];
        let x2 = dot(x, x);
        let sh = &self.sh;
        let b = &self.b;
        let shx = sh.apply(x);
        let q = dot(&shx, x);
        let bx = b.apply(x);
        let rx = self.intrinsic_jacobi(x);
        let two = T::from_i64(2);
        let half = T::ratio(1, 2);
        let sum = |g: &dyn Fn(usize) -> T| (0..k).fold(T::zero(), |acc, i| acc + g(i));

        let trace_b = b.trace() - self.ct1.clone();
        let mixed = sum(&|i| self.rt(&f[i], &xa, &xn, &f[i]));
        let eine3 = dot(&self.eine3_matrix().apply(x), x);

        let trace_b2 = b.matmul(b).trace() - self.ct2.clone();
        let cubic = sum(&|i| self.rt(&f[i], &xa, &xn, &self.embed(&b.column(i))));

        let s_sq = (0..k).fold(T::zero(), |acc, i| {
            (0..k).fold(acc, |acc, j| {
                let s = self.rt(&f[i], &xa, &xn, &f[j]) + self.rt(&f[j], &xa, &xn, &f[i]);
                acc + s.clone() * s
            })
        });
        let sh_term = sh.scale(&sh.matmul(b).trace()).sub(&sh.matmul(b).matmul(sh));
        let quadratic = dot(&bx, &bx) + rx.matmul(b).trace() - dot(&sh_term.apply(x), x) + half * s_sq
            - self.ct2.clone() * x2.clone();

        let sh_xa = self.embed(&shx);
        let linear = sum(&|i| self.rt(&f[i], &xn, &xa, &self.embed(&rx.column(i))))
            - q.clone() * sum(&|i| self.rt(&f[i], &xn, &xa, &self.embed(&sh.column(i))))
            + self.rt(&xa, &sh_xa, &sh_xa, &xn)
            - self.rt(&self.embed(&bx), &xa, &xa, &xn);

        let rt_x_xn = CurvatureModel::jacobi(&self.model, &xa, &xn);
        let bxx = dot(&bx, x);
        let sh3x = sh.apply(&sh.apply(&shx));
        let c2_term = match &self.c2 {
            Some(c2) => c2.clone() * x2.clone() * x2.clone(),
            None => rx.matmul(&rx).trace(),
        };
        let constant = two.clone() * dot(&rt_x_xn, &rt_x_xn) - bxx.clone() * bxx
            - two.clone() * q.clone() * rx.matmul(sh).trace()
            + two.clone() * self.intrinsic(&shx, x, x, &shx)
            + sh.matmul(sh).trace() * q.clone() * q.clone()
            + dot(&shx, &shx) * dot(&shx, &shx)
            - two * q * dot(&sh3x, x)
            - (self.ct2.clone() * x2.clone() * x2 - c2_term);

        vec![
            Identity { name: "deg1-t2-trace-b", value: trace_b },
            Identity { name: "deg1-t1-mixed-trace", value: mixed },
            Identity { name: "deg1-t0-shape-equation", value: eine3 },
            Identity { name: "deg2-t4-trace-b2", value: trace_b2 },
            Identity { name: "deg2-t3", value: cubic },
            Identity { name: "deg2-t2", value: quadratic },
            Identity { name: "deg2-t1", value: linear },
            Identity { name: "deg2-t0", value: constant },
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Identity<T> {
    pub name: &'static str,
    pub value: T,
}

/// Largest entry of the shape-equation defect matrix.
pub fn eine3_residual<T: Scalar, M: CurvatureModel<T>>(fr: &TwoSteinFrame<T, M>) -> f64 {
    max_abs_entry(&fr.eine3_matrix())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankVerdict<T> {
    pub c1: T,
    /// `c_1 = (n-2) ρ`.
    pub c1_matches: bool,
    /// Largest entry of `Sh^2 - (Tr Sh) Sh`.
    pub sh_square_residual: f64,
    pub rank: usize,
}

impl<T> RankVerdict<T> {
    pub fn holds(&self) -> bool {
        self.c1_matches && self.sh_square_residual == 0.0 && self.rank <= 1
    }
}

/// For a hypersurface of a space form satisfying the shape equation: checks
/// `c_1 = (n-2)ρ`, `Sh^2 = (Tr Sh) Sh` and returns `rank Sh`.
pub fn rank_sh_conclusion<T: Scalar>(fr: &TwoSteinFrame<T, ConstantCurvature<T>>, tol: f64) -> Result<RankVerdict<T>> {
    let rho = fr.model().rho.clone();
    let n = fr.n() as i64;
    let t = if T::EXACT { 0.0 } else { tol };
    if !(fr.ct1.clone() - T::from_i64(n - 1) * rho.clone()).is_negligible(t)
        || !(fr.ct2.clone() - T::from_i64(n - 1) * rho.clone() * rho.clone()).is_negligible(t)
    {
        return Err(Error::Precondition("ambient constants are not those of the space form".into()));
    }
    let e3 = fr.eine3_matrix();
    if !e3.is_negligible(t) {
        return Err(Error::Precondition(format!("shape equation violated, residual {:e}", e3.max_abs())));
    }
    let c1 = fr.c1.clone();
    let c1_matches = (c1.clone() - T::from_i64(n - 2) * rho).is_negligible(t);
    let sh = fr.sh();
    let sq = sh.matmul(sh).sub(&sh.scale(&sh.trace()));
    let sh_square_residual = if sq.is_negligible(t) { 0.0 } else { sq.max_abs() };
    Ok(RankVerdict { c1, c1_matches, sh_square_residual, rank: sh.rank(t) })
}

/// Equality case of Cauchy-Schwarz: `c̃_2 (n-1) = c̃_1^2`.
pub fn cauchy_schwarz_constant_curvature<T: Scalar>(ct1: &T, ct2: &T, n: usize, tol: f64) -> bool {
    let d = ct2.clone() * T::from_i64(n as i64 - 1) - ct1.clone() * ct1.clone();
    d.is_negligible(if T::EXACT { 0.0 } else { tol })
}

/// Standard frame of `R^n` with the normal at index `normal`, tangent vectors
/// in increasing index order.
pub fn coordinate_frame<T: Scalar>(n: usize, normal: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = (0..n).filter(|&i| i != normal).map(|i| crate::curvature::unit(n, i)).collect();
    out.push(crate::curvature::unit(n, normal));
    out
}

/// Geodesic sphere of `OP^2` at the Einstein radius, seen from the centre
/// direction `ξ = (1, 0)`: `Sh = diag(α_1 × 7, α_3 × 8)` from the solved
/// `(7, 8)` case with `ε' = +1`, `c̃_1 = 9`, `c̃_2 = 15/2`.
pub fn op2_sphere_frame() -> Result<TwoSteinFrame<crate::surd::QuadSurd, crate::octonion::CayleyPlane>> {
    use crate::surd::QuadSurd;
    let sol = crate::einstein::solve_case_78(1)?;
    let br = sol.branches.iter().find(|b| b.eps_prime == 1).ok_or(Error::DegenerateSystem("no (7,8) branch"))?;
    let diag: Vec<QuadSurd> = (0..15).map(|i| if i < 7 { br.alphas[0].clone() } else { br.alphas[1].clone() }).collect();
    TwoSteinFrame::new(
        crate::octonion::CayleyPlane::new(1)?,
        coordinate_frame(16, 0),
        Mat::diagonal(&diag),
        QuadSurd::from_i64(9),
        QuadSurd::ratio(15, 2),
        None,
        None,
    )
}

/// The same frame in floating point.
pub fn op2_sphere_frame_f64() -> Result<TwoSteinFrame<f64, crate::octonion::CayleyPlane>> {
    let fr = op2_sphere_frame()?;
    let sh = fr.sh().map(|x| x.to_f64());
    TwoSteinFrame::new(*fr.model(), coordinate_frame(16, 0), sh, 9.0, 7.5, None, None)
}
