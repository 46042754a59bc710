//! The seeded random source owned by each run.
//!
//! Backed by ChaCha8 (`rand_chacha::ChaCha8Rng`), whose output stream is fixed
//! by its seed on every platform. Uniform reals take the top 53 bits of one
//! `u64` draw, so they lie in `[0, 1)` on a 2^-53 grid.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name recorded in run metadata.
pub const GENERATOR_NAME: &str = "ChaCha8 (rand_chacha 0.9), seed_from_u64";

#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// A uniform draw from `[low, high)`.
    pub fn uniform_in(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.uniform()
    }

    /// A uniform index in `0..n`. Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index from an empty range");
        self.rng.random_range(0..n as u64) as usize
    }

    /// Two distinct uniform indices in `0..n`, in draw order. Panics if `n < 2`.
    pub fn distinct_pair(&mut self, n: usize) -> (usize, usize) {
        assert!(n >= 2, "distinct pair from fewer than two items");
        let first = self.index(n);
        let mut second = self.index(n - 1);
        if second >= first {
            second += 1;
        }
        (first, second)
    }

    /// Standard normal draw (Box-Muller, two uniforms per call).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
