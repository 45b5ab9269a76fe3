//! Seeded random streams.
//!
//! A [`RandomStream`] is a ChaCha8 generator that remembers the seed it was
//! built from. Independent substreams for parallel work are derived with
//! [`RandomStream::substream`]: substream `k` of root seed `s` is seeded with
//! `s ^ ((k + 1) · 0x9E37_79B9_7F4A_7C15)` (wrapping multiply), so the
//! mapping is fixed and results do not depend on scheduling order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Real;

const SUBSTREAM_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn substream_seed(root: u64, index: u64) -> u64 {
    root ^ index.wrapping_add(1).wrapping_mul(SUBSTREAM_MIX)
}

#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Fresh stream for task `index`, derived from this stream's seed only
    /// (not from its current position).
    pub fn substream(&self, index: u64) -> Self {
        Self::new(substream_seed(self.seed, index))
    }

    /// Draw from U[0, 1).
    #[inline]
    pub fn uniform<T: Real>(&mut self) -> T {
        T::unit_uniform(&mut self.rng)
    }

    #[inline]
    pub fn standard_normal<T: Real>(&mut self) -> T {
        T::standard_normal(&mut self.rng)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
