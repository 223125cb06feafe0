//! Dense matrices over any [`Scalar`], plus the `f64`-only symmetric
//! eigensolver.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(columns: &[Vec<T>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j].clone())
    }

    pub fn diagonal(d: &[T]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out: Mat<T> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "apply shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Largest entry magnitude, as `f64`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.data.iter().all(|a| a.is_negligible(tol))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square() && self.sub(&self.transpose()).is_negligible(tol)
    }

    pub fn is_skew(&self, tol: f64) -> bool {
        self.is_square() && self.add(&self.transpose()).is_negligible(tol)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, rhs: &Mat<T>) -> Mat<T> {
        let (r, c) = (self.rows, self.cols);
        Mat::from_fn(r + rhs.rows, c + rhs.cols, |i, j| match (i < r, j < c) {
            (true, true) => self[(i, j)].clone(),
            (false, false) => rhs[(i - r, j - c)].clone(),
            _ => T::zero(),
        })
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Mat<T>) -> Mat<T> {
        Mat::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)].clone() * rhs[(i % rhs.rows, j % rhs.cols)].clone()
        })
    }

    /// Reduced row echelon form with pivots chosen as the largest entry in
    /// floating mode and the first nonzero entry in exact mode. Returns the
    /// pivot columns.
    pub fn row_reduce(&mut self, tol: f64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let candidate = if T::EXACT {
                (r..self.rows).find(|&i| !self[(i, c)].is_zero())
            } else {
                (r..self.rows)
                    .max_by(|&a, &b| {
                        self[(a, c)].to_f64().abs().total_cmp(&self[(b, c)].to_f64().abs())
                    })
                    .filter(|&i| !self[(i, c)].is_negligible(tol))
            };
            let Some(p) = candidate else { continue };
            self.swap_rows(r, p);
            let inv = T::one() / self[(r, c)].clone();
            for j in 0..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in 0..self.cols {
                    let v = self[(r, j)].clone();
                    if !v.is_zero() {
                        self[(i, j)] = self[(i, j)].clone() - f.clone() * v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.clone().row_reduce(tol).len()
    }

    /// Basis of the null space (exact in exact mode).
    pub fn kernel(&self, tol: f64) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.row_reduce(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let p = if T::EXACT {
                (c..n).find(|&i| !m[(i, c)].is_zero())
            } else {
                (c..n).max_by(|&a, &b| m[(a, c)].to_f64().abs().total_cmp(&m[(b, c)].to_f64().abs()))
            };
            let Some(p) = p else { return T::zero() };
            if m[(p, c)].is_zero() {
                return T::zero();
            }
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() / pivot.clone();
                for j in c..n {
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                }
            }
        }
        det
    }

    /// Solves `self * x = b` for square, nonsingular `self`.
    pub fn solve(&self, b: &[T], tol: f64) -> Option<Vec<T>> {
        let n = self.rows;
        let mut aug = Mat::from_fn(n, n + 1, |i, j| if j < n { self[(i, j)].clone() } else { b[i].clone() });
        let pivots = aug.row_reduce(tol);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        Some((0..n).map(|i| aug[(i, n)].clone()).collect())
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x.clone() * y.clone()
        }
    })
}

pub fn norm2<T: Scalar>(a: &[T]) -> T {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(norm2(a))
}

pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale<T: Scalar>(c: &T, a: &[T]) -> Vec<T> {
    a.iter().map(|x| c.clone() * x.clone()).collect()
}

/// `a + c*b`
pub fn axpy<T: Scalar>(a: &[T], c: &T, b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + c.clone() * y.clone()).collect()
}

pub fn to_f64_vec<T: Scalar>(a: &[T]) -> Vec<f64> {
    a.iter().map(Scalar::to_f64).collect()
}

pub fn is_zero_vec<T: Scalar>(a: &[T], tol: f64) -> bool {
    a.iter().all(|x| x.is_negligible(tol))
}

pub fn max_abs<T: Scalar>(a: &[T]) -> f64 {
    a.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
}

/// Orthogonal (not normalized) basis of `span(vectors)` by Gram-Schmidt in
/// the given order; vectors whose remainder is negligible are dropped. Exact
/// scalars stay exact because no square roots are taken.
pub fn orthogonal_basis<T: Scalar>(vectors: &[Vec<T>], tol: f64) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = Vec::new();
    for v in vectors {
        let r = residual_against(&basis, v);
        let scale = if T::EXACT { 1.0 } else { libm::sqrt(norm2(v).to_f64()).max(1.0) };
        if !r.iter().all(|x| x.is_negligible(tol * scale)) {
            basis.push(r);
        }
    }
    basis
}

/// Component of `v` orthogonal to the span of an orthogonal basis.
pub fn residual_against<T: Scalar>(orthogonal: &[Vec<T>], v: &[T]) -> Vec<T> {
    let mut r = v.to_vec();
    for u in orthogonal {
        let uu = norm2(u);
        if uu.is_zero() {
            continue;
        }
        let c = dot(&r, u) / uu;
        if !c.is_zero() {
            r = axpy(&r, &(-c), u);
        }
    }
    r
}

/// Orthonormal basis (floating), deterministic Gram-Schmidt with
/// reorthogonalization, in the given order.
pub fn orthonormalize(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for u in &basis {
                let c = dot(&r, u);
                r = axpy(&r, &(-c), u);
            }
        }
        let n = norm(&r);
        if n > tol {
            basis.push(scale(&(1.0 / n), &r));
        }
    }
    basis
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi
/// rotations. Eigenvalues are returned ascending; `vectors[k]` belongs to
/// `values[k]`.
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

pub fn sym_eigen(m: &Mat<f64>) -> SymEigen {
    assert!(m.is_square(), "eigen-decomposition of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    // symmetrize against round-off in the caller
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
    let mut v = Mat::<f64>::identity(n);
    let scale = a.max_abs().max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if libm::sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].total_cmp(&a[(y, y)]));
    SymEigen {
        values: order.iter().map(|&k| a[(k, k)]).collect(),
        vectors: order.iter().map(|&k| v.column(k)).collect(),
    }
}

/// Groups sorted eigenvalues into `(value, multiplicity)` clusters.
pub fn cluster(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &x in values {
        match out.last_mut() {
            Some((v, k)) if (x - *v).abs() <= tol => {
                *v = (*v * *k as f64 + x) / (*k as f64 + 1.0);
                *k += 1;
            }
            _ => out.push((x, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, BigRational};

    #[test]
    fn exact_determinant_and_kernel() {
        let m = Mat::from_rows(&[
            vec![rat(2, 1), rat(1, 1), rat(3, 1)],
            vec![rat(4, 1), rat(2, 1), rat(6, 1)],
            vec![rat(1, 2), rat(0, 1), rat(1, 1)],
        ]);
        assert_eq!(m.det(), rat(0, 1));
        assert_eq!(m.rank(0.0), 2);
        let k = m.kernel(0.0);
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&m.apply(&k[0]), 0.0));
        let i3 = Mat::<BigRational>::identity(3).scale(&rat(3, 2));
        assert_eq!(i3.det(), rat(27, 8));
    }

    #[test]
    fn solve_exact() {
        let m = Mat::from_rows(&[vec![rat(1, 1), rat(2, 1)], vec![rat(3, 1), rat(4, 1)]]);
        let x = m.solve(&[rat(5, 1), rat(6, 1)], 0.0).unwrap();
        assert_eq!(x, vec![rat(-4, 1), rat(9, 2)]);
    }

    #[test]
    fn jacobi_eigen_reconstructs() {
        let m = Mat::from_rows(&[
            vec![4.0, 1.0, -2.0, 2.0],
            vec![1.0, 2.0, 0.0, 1.0],
            vec![-2.0, 0.0, 3.0, -2.0],
            vec![2.0, 1.0, -2.0, -1.0],
        ]);
        let e = sym_eigen(&m);
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            let r = sub(&m.apply(v), &scale(lam, v));
            assert!(norm(&r) < 1e-12);
        }
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        assert!((e.values.iter().sum::<f64>() - m.trace()).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_exact_drops_dependent() {
        let vs = vec![
            vec![rat(1, 1), rat(1, 1), rat(0, 1)],
            vec![rat(2, 1), rat(2, 1), rat(0, 1)],
            vec![rat(1, 1), rat(0, 1), rat(1, 1)],
        ];
        let b = orthogonal_basis(&vs, 0.0);
        assert_eq!(b.len(), 2);
        assert_eq!(dot(&b[0], &b[1]), rat(0, 1));
    }

    #[test]
    fn clusters() {
        let c = cluster(&[-1.0, -1.0 + 1e-12, -0.25, 0.0], 1e-9);
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].1, 2);
    }
}
