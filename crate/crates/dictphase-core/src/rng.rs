//! Seeded random streams.
//!
//! All randomness in the crate flows through [`RngStream`], a ChaCha8
//! counter-based stream cipher keyed from a `u64` seed. Distinct
//! consumers (frame construction, ensembles, noise, solver restarts, ...)
//! derive independent streams from one user seed via [`derive_seed`], so
//! adding a consumer never perturbs the draws of another.
//!
//! [`GENERATOR_VERSION`] names the generator plus the normal-sampling
//! algorithm and is recorded in reports; identical version strings mean
//! bit-identical output for identical seeds.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Generator identity recorded in serialized reports.
pub const GENERATOR_VERSION: &str = "chacha8/splitmix64-derive/ziggurat-normal v1";

/// Stream labels for the crate's internal consumers.
pub mod streams {
    pub const FRAME: u64 = 0x01;
    pub const ENSEMBLE: u64 = 0x02;
    pub const NOISE: u64 = 0x03;
    pub const SOLVER: u64 = 0x04;
    pub const CERTIFY: u64 = 0x05;
    pub const LEMMAS: u64 = 0x06;
    pub const HARNESS: u64 = 0x07;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministically mixes a user seed with a stream label (and optional
/// indices) into a fresh sub-seed.
pub fn derive_seed(seed: u64, stream: u64, indices: &[u64]) -> u64 {
    let mut acc = splitmix64(seed ^ splitmix64(stream));
    for &ix in indices {
        acc = splitmix64(acc ^ splitmix64(ix.wrapping_add(0xa5a5_a5a5_a5a5_a5a5)));
    }
    acc
}

/// A deterministic stream of draws.
pub struct RngStream {
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        RngStream {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for one labeled consumer of a user seed.
    pub fn for_stream(seed: u64, stream: u64) -> Self {
        Self::from_seed(derive_seed(seed, stream, &[]))
    }

    /// Stream for one labeled consumer at explicit indices (trial number,
    /// restart number, ...).
    pub fn for_indexed(seed: u64, stream: u64, indices: &[u64]) -> Self {
        Self::from_seed(derive_seed(seed, stream, indices))
    }

    /// One standard normal draw.
    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Vector of standard normal draws.
    pub fn normal_vec(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.normal()).collect()
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform01(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform integer in `[0, bound)`.
    pub fn below(&mut self, bound: usize) -> usize {
        self.inner.gen_range(0..bound)
    }

    /// Random `+/-1` with equal probability.
    pub fn sign(&mut self) -> f64 {
        if self.inner.gen::<bool>() {
            1.0
        } else {
            -1.0
        }
    }

    /// Vector of random signs.
    pub fn sign_vec(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.sign()).collect()
    }

    /// Sorted random subset of `{0, .., n-1}` of the given size
    /// (partial Fisher-Yates).
    pub fn subset(&mut self, n: usize, size: usize) -> Vec<usize> {
        assert!(size <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        let mut picked: Vec<usize> = pool[..size].to_vec();
        picked.sort_unstable();
        picked
    }
}
