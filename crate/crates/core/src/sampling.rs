//! Seeded draws of bounded rational parameters for the randomized suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::families::{BIParameters, RWParameters};
use crate::rational::Rational;

pub const DEFAULT_BOUND: i64 = 20;
pub const MAX_ATTEMPTS: usize = 1000;

/// Deterministic source of rational parameters.
pub struct Sampler {
    rng: ChaCha8Rng,
    bound: i64,
}

impl Sampler {
    pub fn new(seed: u64, bound: i64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bound: bound.max(1),
        }
    }

    /// `p/q` with `|p| <= bound`, `1 <= q <= bound`.
    pub fn rational(&mut self) -> Rational {
        let p = self.rng.gen_range(-self.bound..=self.bound);
        let q = self.rng.gen_range(1..=self.bound);
        Rational::new(p, q).expect("q >= 1")
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    pub fn rationals(&mut self, n: usize) -> Vec<Rational> {
        (0..n).map(|_| self.rational()).collect()
    }

    pub fn unit_f64(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn f64_in(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn bi_parameters(&mut self) -> BIParameters {
        BIParameters::new(self.rational(), self.rational(), self.rational(), self.rational())
    }

    pub fn rw_parameters(&mut self) -> RWParameters {
        RWParameters::new(self.rational(), self.rational(), self.rational(), self.rational())
    }

    /// First draw for which `accept` succeeds; `None` after
    /// [`MAX_ATTEMPTS`] rejections.
    pub fn draw_until<T, U>(
        &mut self,
        mut draw: impl FnMut(&mut Self) -> T,
        mut accept: impl FnMut(&T) -> Result<U>,
    ) -> Option<(T, U)> {
        for _ in 0..MAX_ATTEMPTS {
            let t = draw(self);
            if let Ok(u) = accept(&t) {
                return Some((t, u));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_draws_repeat() {
        let mut a = Sampler::new(7, DEFAULT_BOUND);
        let mut b = Sampler::new(7, DEFAULT_BOUND);
        assert_eq!(a.rationals(20), b.rationals(20));
        let mut c = Sampler::new(8, DEFAULT_BOUND);
        assert_ne!(a.rationals(20), c.rationals(20));
    }

    #[test]
    fn bounded() {
        let mut s = Sampler::new(1, 3);
        for r in s.rationals(200) {
            assert!(r.abs() <= Rational::int(3));
            assert!(r.denom() <= &3.into());
        }
    }

    #[test]
    fn resampling_gives_up() {
        let mut s = Sampler::new(1, 5);
        let got = s.draw_until(|s| s.rational(), |_| Err::<(), _>(crate::error::Error::DivisionByZero));
        assert!(got.is_none());
    }
}
