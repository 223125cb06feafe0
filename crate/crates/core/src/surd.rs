//! Exact numbers of the form `a + b*sqrt(d)` with rational `a`, `b` and a
//! square-free integer `d > 1`.
//!
//! All values taking part in one computation must share the same radicand
//! (or be rational). Mixing two different radicands panics; it would leave
//! the quadratic field.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    pub rational: BigRational,
    pub radical_coeff: BigRational,
    /// Square-free radicand; `1` marks a pure rational.
    pub radicand: u64,
}

impl QuadSurd {
    pub fn rational(r: BigRational) -> Self {
        QuadSurd { rational: r, radical_coeff: BigRational::zero(), radicand: 1 }
    }

    /// `a + b*sqrt(d)`; `d` is reduced to its square-free part.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        assert!(d > 0, "radicand must be positive");
        let (outside, free) = square_free_split(d);
        if free == 1 {
            let a = a + b * BigRational::from_integer(BigInt::from(outside));
            return QuadSurd::rational(a);
        }
        let b = b * BigRational::from_integer(BigInt::from(outside));
        let mut s = QuadSurd { rational: a, radical_coeff: b, radicand: free };
        s.normalize();
        s
    }

    /// Exact square root of a nonnegative rational, or `None` when `q < 0`.
    pub fn sqrt_of(q: &BigRational) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        if q.is_zero() {
            return Some(QuadSurd::rational(BigRational::zero()));
        }
        // sqrt(n/d) = sqrt(n*d)/d
        let n = q.numer().to_u64()?;
        let d = q.denom().to_u64()?;
        let (outside, free) = square_free_split(n * d);
        let coeff = BigRational::new(BigInt::from(outside), BigInt::from(d));
        Some(if free == 1 {
            QuadSurd::rational(coeff)
        } else {
            QuadSurd { rational: BigRational::zero(), radical_coeff: coeff, radicand: free }
        })
    }

    pub fn is_rational(&self) -> bool {
        self.radical_coeff.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadSurd {
            rational: self.rational.clone(),
            radical_coeff: -self.radical_coeff.clone(),
            radicand: self.radicand,
        }
    }

    /// `(a + b√d)(a − b√d)`, always rational.
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from_integer(BigInt::from(self.radicand));
        self.rational.clone() * self.rational.clone()
            - self.radical_coeff.clone() * self.radical_coeff.clone() * d
    }

    pub fn signum(&self) -> i32 {
        let sa = sign(&self.rational);
        let sb = sign(&self.radical_coeff);
        if sb == 0 || self.radicand == 1 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d
        match self.norm().cmp(&BigRational::zero()) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    fn normalize(&mut self) {
        if self.radical_coeff.is_zero() {
            self.radicand = 1;
        }
    }

    fn common_radicand(&self, other: &Self) -> u64 {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.radicand,
            (_, true) => self.radicand,
            _ => {
                assert_eq!(
                    self.radicand, other.radicand,
                    "quadratic surds with different radicands cannot be combined"
                );
                self.radicand
            }
        }
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// `n = outside^2 * free` with `free` square-free.
fn square_free_split(mut n: u64) -> (u64, u64) {
    let mut outside = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        outside *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    free *= n;
    (outside, free)
}

impl Add for QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: Self) -> Self {
        let d = self.common_radicand(&rhs);
        let mut s = QuadSurd {
            rational: self.rational + rhs.rational,
            radical_coeff: self.radical_coeff + rhs.radical_coeff,
            radicand: d,
        };
        s.normalize();
        s
    }
}

impl Sub for QuadSurd {
    type Output = QuadSurd;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> Self {
        QuadSurd { rational: -self.rational, radical_coeff: -self.radical_coeff, radicand: self.radicand }
    }
}

impl Mul for QuadSurd {
    type Output = QuadSurd;
    fn mul(self, rhs: Self) -> Self {
        let d = self.common_radicand(&rhs);
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = self.rational.clone() * rhs.rational.clone()
            + self.radical_coeff.clone() * rhs.radical_coeff.clone() * dd;
        let b = self.rational * rhs.radical_coeff + self.radical_coeff * rhs.rational;
        let mut s = QuadSurd { rational: a, radical_coeff: b, radicand: d };
        s.normalize();
        s
    }
}

impl Div for QuadSurd {
    type Output = QuadSurd;
    fn div(self, rhs: Self) -> Self {
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero surd");
        let inv = QuadSurd {
            rational: rhs.rational.clone() / n.clone(),
            radical_coeff: -rhs.radical_coeff.clone() / n,
            radicand: rhs.radicand,
        };
        self * inv
    }
}

impl Zero for QuadSurd {
    fn zero() -> Self {
        QuadSurd::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.radical_coeff.is_zero()
    }
}

impl One for QuadSurd {
    fn one() -> Self {
        QuadSurd::rational(BigRational::one())
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).signum().cmp(&0))
    }
}

impl Scalar for QuadSurd {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        QuadSurd::rational(BigRational::from_integer(BigInt::from(v)))
    }

    fn to_f64(&self) -> f64 {
        Scalar::to_f64(&self.rational) + Scalar::to_f64(&self.radical_coeff) * libm::sqrt(self.radicand as f64)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.rational);
        }
        if !self.rational.is_zero() {
            write!(f, "{} + ", self.rational)?;
        }
        write!(f, "({})*sqrt({})", self.radical_coeff, self.radicand)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn square_free_parts() {
        assert_eq!(square_free_split(96), (4, 6));
        assert_eq!(square_free_split(91), (1, 91));
        assert_eq!(square_free_split(1), (1, 1));
        assert_eq!(square_free_split(36), (6, 1));
    }

    #[test]
    fn sqrt_of_rational() {
        // sqrt(25/96) = 5 sqrt(6) / 24
        let s = QuadSurd::sqrt_of(&rat(25, 96)).unwrap();
        assert_eq!(s, QuadSurd::new(rat(0, 1), rat(5, 24), 6));
        assert!(QuadSurd::sqrt_of(&rat(-1, 3)).is_none());
        assert_eq!(QuadSurd::sqrt_of(&rat(9, 4)).unwrap(), QuadSurd::rational(rat(3, 2)));
    }

    #[test]
    fn field_operations() {
        let x = QuadSurd::new(rat(1, 2), rat(3, 1), 6);
        let y = QuadSurd::new(rat(-2, 1), rat(1, 5), 6);
        let q = x.clone() / y.clone();
        assert_eq!(q * y, x.clone());
        assert_eq!(x.clone() * x.conjugate(), QuadSurd::rational(x.norm()));
        let r = QuadSurd::sqrt_of(&rat(6, 1)).unwrap();
        assert_eq!(r.clone() * r, QuadSurd::from_i64(6));
    }

    #[test]
    fn signs() {
        // 1 - sqrt(2) < 0, 2 - sqrt(2) > 0
        assert_eq!(QuadSurd::new(rat(1, 1), rat(-1, 1), 2).signum(), -1);
        assert_eq!(QuadSurd::new(rat(2, 1), rat(-1, 1), 2).signum(), 1);
        assert_eq!(QuadSurd::new(rat(0, 1), rat(-1, 7), 91).signum(), -1);
    }

    #[test]
    #[should_panic]
    fn mixed_radicands_panic() {
        let _ = QuadSurd::new(rat(0, 1), rat(1, 1), 2) + QuadSurd::new(rat(0, 1), rat(1, 1), 3);
    }
}
