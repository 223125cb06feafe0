//! Real Clifford modules over `Cl(z, -<,>)` for `dim z = m <= 8`.
//!
//! Construction (fixed basis convention). With the real 2x2 blocks
//!
//! ```text
//! E = [[0,-1],[1,0]]   P = [[1,0],[0,-1]]   Q = [[0,1],[1,0]]
//! ```
//!
//! and `L_q`, `R_q` the left/right multiplications by the quaternion units
//! `i, j, k` on `H = R^4` (basis `1, i, j, k`):
//!
//! | m | dim v | generators |
//! |---|-------|------------|
//! | 1 | 2  | `E` |
//! | 2 | 4  | `L_i, L_j` |
//! | 3 | 4  | `L_i, L_j, L_k` |
//! | 4..=7 | 8 | `L_i⊗P, L_j⊗P, L_k⊗P, I⊗E`, then `R_i⊗Q, R_j⊗Q, R_k⊗Q` as needed |
//! | 8 | 16 | the seven `m = 7` generators `⊗P`, then `I⊗E` |
//!
//! Every generator is a signed permutation matrix, so all Clifford identities
//! are checked in exact arithmetic. For `m ≡ 3 (mod 4)` the volume element
//! `J_1 ⋯ J_m` is `±id` on an irreducible module; the sign is the module's
//! [`Class`], and the opposite class is obtained by negating `J_m`.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::{dot, Mat};
use crate::scalar::Scalar;

/// Inequivalence class of an irreducible module for `m ≡ 3 (mod 4)`: the sign
/// of the volume element `J_1 ⋯ J_m`. Only [`Class::Positive`] exists for
/// other `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    Positive,
    Negative,
}

impl Class {
    pub fn sign(self) -> i64 {
        match self {
            Class::Positive => 1,
            Class::Negative => -1,
        }
    }
}

/// A signed permutation matrix: row `r` has the single entry `sign[r]` in
/// column `col[r]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPerm {
    col: Vec<usize>,
    sign: Vec<i8>,
}

impl SignedPerm {
    fn from_matrix(m: &Mat<BigRational>) -> Self {
        let n = m.rows();
        let mut col = vec![0; n];
        let mut sign = vec![0i8; n];
        for r in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&c| !num_traits::Zero::is_zero(&m[(r, c)])).collect();
            assert_eq!(nz.len(), 1, "generator row {r} is not a signed permutation row");
            col[r] = nz[0];
            sign[r] = if m[(r, nz[0])] == BigRational::from_i64(1) { 1 } else { -1 };
        }
        SignedPerm { col, sign }
    }

    pub fn dim(&self) -> usize {
        self.col.len()
    }

    pub fn apply<T: Scalar>(&self, v: &[T]) -> Vec<T> {
        self.col
            .iter()
            .zip(&self.sign)
            .map(|(&c, &s)| if s > 0 { v[c].clone() } else { -v[c].clone() })
            .collect()
    }

    pub fn to_matrix<T: Scalar>(&self) -> Mat<T> {
        Mat::from_fn(self.dim(), self.dim(), |r, c| {
            if self.col[r] == c {
                T::from_i64(self.sign[r] as i64)
            } else {
                T::zero()
            }
        })
    }

    fn negated(&self) -> Self {
        SignedPerm { col: self.col.clone(), sign: self.sign.iter().map(|s| -s).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordRep {
    m: usize,
    dim_v: usize,
    generators: Vec<SignedPerm>,
    /// `(class, dim)` of each irreducible block, in block order.
    blocks: Vec<(Class, usize)>,
}

/// Dimension of an irreducible real `Cl(m)` module with negative definite
/// form.
pub fn irreducible_dim(m: usize) -> Result<usize> {
    match m {
        1 => Ok(2),
        2 | 3 => Ok(4),
        4..=7 => Ok(8),
        8 => Ok(16),
        _ => Err(Error::UnsupportedDimension(m)),
    }
}

/// Whether `Cl(m)` has two inequivalent irreducible modules.
pub fn has_two_classes(m: usize) -> bool {
    m % 4 == 3
}

fn int_mat(rows: &[&[i64]]) -> Mat<BigRational> {
    Mat::from_fn(rows.len(), rows[0].len(), |i, j| BigRational::from_i64(rows[i][j]))
}

fn quat_mul(a: [i64; 4], b: [i64; 4]) -> [i64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn unit(k: usize) -> [i64; 4] {
    let mut u = [0; 4];
    u[k] = 1;
    u
}

/// Left (`left = true`) or right multiplication by the quaternion unit `k`.
fn quat_mult_matrix(k: usize, left: bool) -> Mat<BigRational> {
    Mat::from_fn(4, 4, |r, c| {
        let prod = if left { quat_mul(unit(k), unit(c)) } else { quat_mul(unit(c), unit(k)) };
        BigRational::from_i64(prod[r])
    })
}

fn raw_generators(m: usize) -> Vec<Mat<BigRational>> {
    let e = int_mat(&[&[0, -1], &[1, 0]]);
    let p = int_mat(&[&[1, 0], &[0, -1]]);
    let q = int_mat(&[&[0, 1], &[1, 0]]);
    match m {
        1 => vec![e],
        2 | 3 => (1..=m).map(|k| quat_mult_matrix(k, true)).collect(),
        4..=7 => {
            let mut g: Vec<Mat<BigRational>> = (1..=3).map(|k| quat_mult_matrix(k, true).kron(&p)).collect();
            g.push(Mat::identity(4).kron(&e));
            g.extend((1..=m - 4).map(|k| quat_mult_matrix(k, false).kron(&q)));
            g
        }
        8 => {
            let mut g: Vec<Mat<BigRational>> = raw_generators(7).iter().map(|j| j.kron(&p)).collect();
            g.push(Mat::identity(8).kron(&e));
            g
        }
        _ => unreachable!("dimension checked by caller"),
    }
}

fn volume_sign(gens: &[SignedPerm]) -> i64 {
    let n = gens[0].dim();
    let mut prod = Mat::<BigRational>::identity(n);
    for g in gens {
        prod = prod.matmul(&g.to_matrix());
    }
    let first = prod[(0, 0)].clone();
    assert!(
        prod == Mat::identity(n).scale(&first),
        "volume element is not scalar on an irreducible module"
    );
    if first == BigRational::from_i64(1) {
        1
    } else {
        -1
    }
}

/// Irreducible module for `Cl(m)`. `class` must be [`Class::Positive`] unless
/// `m ≡ 3 (mod 4)`.
pub fn build_irreducible(m: usize, class: Class) -> Result<CliffordRep> {
    let dim_v = irreducible_dim(m)?;
    if class == Class::Negative && !has_two_classes(m) {
        return Err(Error::InvalidMultiplicity { m, plus: 0, minus: 1 });
    }
    let mut generators: Vec<SignedPerm> = raw_generators(m).iter().map(SignedPerm::from_matrix).collect();
    if has_two_classes(m) && volume_sign(&generators) != class.sign() {
        let last = generators.pop().expect("m >= 1");
        generators.push(last.negated());
    }
    Ok(CliffordRep { m, dim_v, generators, blocks: vec![(class, dim_v)] })
}

/// Block-diagonal sum of `mult_plus` copies of the positive class and
/// `mult_minus` copies of the negative class.
pub fn build_module(m: usize, mult_plus: usize, mult_minus: usize) -> Result<CliffordRep> {
    irreducible_dim(m)?;
    if mult_plus + mult_minus == 0 || (mult_minus > 0 && !has_two_classes(m)) {
        return Err(Error::InvalidMultiplicity { m, plus: mult_plus, minus: mult_minus });
    }
    let classes = core::iter::repeat(Class::Positive)
        .take(mult_plus)
        .chain(core::iter::repeat(Class::Negative).take(mult_minus));
    let mut acc: Option<(Vec<Mat<BigRational>>, Vec<(Class, usize)>)> = None;
    for class in classes {
        let irr = build_irreducible(m, class)?;
        let mats: Vec<Mat<BigRational>> = irr.generators.iter().map(SignedPerm::to_matrix).collect();
        acc = Some(match acc {
            None => (mats, irr.blocks),
            Some((prev, mut blocks)) => {
                blocks.extend(irr.blocks);
                (prev.iter().zip(&mats).map(|(a, b)| a.direct_sum(b)).collect(), blocks)
            }
        });
    }
    let (mats, blocks) = acc.expect("at least one block");
    let dim_v = blocks.iter().map(|b| b.1).sum();
    Ok(CliffordRep { m, dim_v, generators: mats.iter().map(SignedPerm::from_matrix).collect(), blocks })
}

/// Exact residual counts of the Clifford axioms: number of nonzero entries
/// in `J_i + J_iᵀ`, `J_i² + id` and `J_iJ_j + J_jJ_i`, summed over generators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AxiomResidual {
    pub skew: usize,
    pub square: usize,
    pub anticommute: usize,
}

impl AxiomResidual {
    pub fn is_exact(&self) -> bool {
        *self == AxiomResidual::default()
    }
}

fn nonzero_count(m: &Mat<BigRational>) -> usize {
    m.entries().filter(|x| !num_traits::Zero::is_zero(*x)).count()
}

impl CliffordRep {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn blocks(&self) -> &[(Class, usize)] {
        &self.blocks
    }

    pub fn generator(&self, i: usize) -> &SignedPerm {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[SignedPerm] {
        &self.generators
    }

    /// `J_Z v` without forming `J_Z`.
    pub fn j_apply<T: Scalar>(&self, z: &[T], v: &[T]) -> Vec<T> {
        assert_eq!(z.len(), self.m, "z has wrong length");
        assert_eq!(v.len(), self.dim_v, "v has wrong length");
        let mut out = vec![T::zero(); self.dim_v];
        for (zi, g) in z.iter().zip(&self.generators) {
            if zi.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(g.apply(v)) {
                *o = o.clone() + zi.clone() * x;
            }
        }
        out
    }

    /// `J_Z = Σ z_i J_i`.
    pub fn j_op<T: Scalar>(&self, z: &[T]) -> Result<Mat<T>> {
        if z.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: z.len() });
        }
        let mut out = Mat::zeros(self.dim_v, self.dim_v);
        for (zi, g) in z.iter().zip(&self.generators) {
            if !zi.is_zero() {
                out = out.add(&g.to_matrix::<T>().scale(zi));
            }
        }
        Ok(out)
    }

    /// The z-valued bracket `[U, V]` defined by `<[U,V], Z> = <J_Z U, V>`.
    pub fn bracket_vv<T: Scalar>(&self, u: &[T], v: &[T]) -> Vec<T> {
        self.generators.iter().map(|g| dot(&g.apply(u), v)).collect()
    }

    pub fn axiom_residual(&self) -> AxiomResidual {
        let n = self.dim_v;
        let id = Mat::<BigRational>::identity(n);
        let mats: Vec<Mat<BigRational>> = self.generators.iter().map(SignedPerm::to_matrix).collect();
        let mut r = AxiomResidual::default();
        for (i, a) in mats.iter().enumerate() {
            r.skew += nonzero_count(&a.add(&a.transpose()));
            r.square += nonzero_count(&a.matmul(a).add(&id));
            for b in &mats[i + 1..] {
                r.anticommute += nonzero_count(&a.matmul(b).add(&b.matmul(a)));
            }
        }
        r
    }

    /// Sign of the volume element on each block (only meaningful when
    /// `m ≡ 3 (mod 4)`).
    pub fn volume_element(&self) -> Mat<BigRational> {
        let mut prod = Mat::identity(self.dim_v);
        for g in &self.generators {
            prod = prod.matmul(&g.to_matrix());
        }
        prod
    }
}
