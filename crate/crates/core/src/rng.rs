//! Reproducible random streams.
//!
//! Every Monte-Carlo consumer (a single-arm run, one arm of a bandit
//! episode, a bootstrap) owns an [`RngStream`] built from a master seed and a
//! stream id. The generator is ChaCha8 with the stream id mapped onto the
//! cipher's 64-bit stream counter, so streams with distinct ids never overlap
//! and any (seed, stream) pair reproduces the same sequence regardless of
//! which thread consumes it.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Number of stream slots reserved per run; see [`RngStream::for_run`].
pub const SLOTS_PER_RUN: u64 = 256;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    /// Stream for `slot` (an arm index, or a reserved policy slot) of run `run`.
    pub fn for_run(seed: u64, run: u64, slot: u64) -> Self {
        assert!(slot < SLOTS_PER_RUN, "slot {slot} out of range");
        Self::new(seed, run * SLOTS_PER_RUN + slot)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform variate on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}
