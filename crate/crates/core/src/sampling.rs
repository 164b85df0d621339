//! Seeded random sampling used by audits and model generation.
//!
//! All randomness in the toolkit flows through `SamplingRng`, a ChaCha20
//! stream cipher generator, so every report can name the generator and seed
//! that reproduce it.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{CMat, CVec, C64};

/// Generator name recorded in reports next to the seed.
pub const RNG_NAME: &str = "chacha20";

/// The toolkit's seeded random number generator.
pub struct SamplingRng(ChaCha20Rng);

impl SamplingRng {
    pub fn seed_from(seed: u64) -> Self {
        Self(ChaCha20Rng::seed_from_u64(seed))
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.0)
    }

    /// Complex Gaussian with unit variance (each component N(0, 1/2)).
    pub fn complex_normal(&mut self) -> C64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        C64::new(self.normal() * s, self.normal() * s)
    }

    /// Complex entry with independent standard normal real and imaginary
    /// parts.
    pub fn complex_wide(&mut self) -> C64 {
        C64::new(self.normal(), self.normal())
    }
}

/// Random complex vector with unit-variance complex Gaussian entries.
pub fn random_state(n: usize, rng: &mut SamplingRng) -> CVec {
    CVec::from_fn(n, |_, _| rng.complex_normal())
}

/// Random complex matrix with unit-variance complex Gaussian entries.
pub fn random_matrix(rows: usize, cols: usize, rng: &mut SamplingRng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| rng.complex_normal())
}
