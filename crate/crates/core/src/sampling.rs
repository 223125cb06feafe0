//! Seeded sampling. Sample `i` of a run with seed `s` draws from its own
//! ChaCha stream `(s, i)`, so results never depend on evaluation order.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct SampleRng(ChaCha8Rng);

impl SampleRng {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        SampleRng(rng)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.0.next_u64() % span) as i64
    }

    /// Standard normal by Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
    }

    pub fn gaussian_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.gaussian()).collect()
    }

    /// Uniformly distributed unit vector (normalized Gaussian).
    pub fn unit_vec(&mut self, n: usize) -> Vec<f64> {
        loop {
            let v = self.gaussian_vec(n);
            let r = crate::linalg::norm(&v);
            if r > 1e-8 {
                return v.into_iter().map(|x| x / r).collect();
            }
        }
    }

    /// Rational with numerator in `-num..=num` and denominator in `1..=den`.
    pub fn small_rational(&mut self, num: i64, den: i64) -> BigRational {
        let n = self.int_in(-num, num);
        let d = self.int_in(1, den);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn rational_vec(&mut self, n: usize, num: i64, den: i64) -> Vec<BigRational> {
        (0..n).map(|_| self.small_rational(num, den)).collect()
    }
}
