//! Ambient curvature evaluators behind one interface: given `X, Y, Z`,
//! return `R(X,Y)Z`. Conventions: `R_X Y = R(Y,X)X` is the Jacobi operator,
//! `R(X,Y,Z,W) = <R(X,Y)Z, W>` and the sectional curvature of an orthonormal
//! pair is `R(Y,X,X,Y)`.

use alloc::vec::Vec;

use crate::damek_ricci::{DRSpace, TangentVec};
use crate::linalg::{self, dot, Mat};
use crate::scalar::Scalar;

pub trait CurvatureModel<T: Scalar> {
    fn dim(&self) -> usize;

    /// `R(X,Y)Z`.
    fn curvature(&self, x: &[T], y: &[T], z: &[T]) -> Vec<T>;

    /// `R_T U = R(U,T)T`.
    fn jacobi(&self, t: &[T], u: &[T]) -> Vec<T> {
        self.curvature(u, t, t)
    }

    fn curvature4(&self, x: &[T], y: &[T], z: &[T], w: &[T]) -> T {
        dot(&self.curvature(x, y, z), w)
    }

    fn jacobi_matrix(&self, t: &[T]) -> Mat<T> {
        let n = self.dim();
        let cols: Vec<Vec<T>> = (0..n).map(|k| self.jacobi(t, &unit::<T>(n, k))).collect();
        Mat::from_columns(&cols)
    }
}

pub(crate) fn unit<T: Scalar>(n: usize, k: usize) -> Vec<T> {
    let mut e = alloc::vec![T::zero(); n];
    e[k] = T::one();
    e
}

/// Space form of curvature `rho`: `R(X,Y)Z = rho (<Y,Z>X - <X,Z>Y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantCurvature<T> {
    pub n: usize,
    pub rho: T,
}

impl<T: Scalar> CurvatureModel<T> for ConstantCurvature<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn curvature(&self, x: &[T], y: &[T], z: &[T]) -> Vec<T> {
        let a = self.rho.clone() * dot(y, z);
        let b = self.rho.clone() * dot(x, z);
        linalg::sub(&linalg::scale(&a, x), &linalg::scale(&b, y))
    }
}

/// Recovers `R(X,Y)Z` from Jacobi operators only:
/// `R(X,Y)Z = (S(Y,Z)X - S(X,Z)Y) / 3` with `S(A,B)C = R_{A+B}C - R_A C - R_B C`.
pub fn curvature_from_jacobi<T: Scalar>(
    jacobi: impl Fn(&[T], &[T]) -> Vec<T>,
    x: &[T],
    y: &[T],
    z: &[T],
) -> Vec<T> {
    let s = |a: &[T], b: &[T], c: &[T]| {
        let ab = linalg::add(a, b);
        linalg::sub(&linalg::sub(&jacobi(&ab, c), &jacobi(a, c)), &jacobi(b, c))
    };
    let d = linalg::sub(&s(y, z, x), &s(x, z, y));
    linalg::scale(&T::ratio(1, 3), &d)
}

impl<T: Scalar> CurvatureModel<T> for DRSpace {
    fn dim(&self) -> usize {
        self.dim_s()
    }

    fn curvature(&self, x: &[T], y: &[T], z: &[T]) -> Vec<T> {
        curvature_from_jacobi(|t, u| CurvatureModel::<T>::jacobi(self, t, u), x, y, z)
    }

    fn jacobi(&self, t: &[T], u: &[T]) -> Vec<T> {
        let dv = self.dim_v();
        self.jacobi_apply(&TangentVec::from_flat(t, dv), &TangentVec::from_flat(u, dv)).to_flat()
    }
}
