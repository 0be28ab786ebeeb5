//! Deterministic shared randomness.
//!
//! Encoder and decoder both regenerate the identical variate sequence from a
//! `(seed, substream_id)` pair, which is what lets a transmitted index select
//! a sample the receiver can reproduce. The generator is counter-based
//! (Philox 2x64-10), so draw `k` of substream `s` is a pure function of
//! `(seed, s, k)`: no serial coupling between substreams, and streams for
//! distinct records can be created in any order.
//!
//! All non-uniform variates are derived from uniforms by inverse CDF with
//! fixed local approximations. Nothing here calls a platform sampler; the
//! draw sequence is bit-identical on every platform and run.

use crate::math;

const PHILOX_M: u64 = 0xD2B7_4407_B1CE_6E93;
const PHILOX_W: u64 = 0x9E37_79B9_7F4A_7C15;
const PHILOX_ROUNDS: u32 = 10;

/// Seeded, substream-indexed source of reproducible variates.
///
/// A stream is cheap to construct; by convention record `i` of a coded file
/// uses `substream_id = i`. The counter advances by exactly one per draw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicStream {
    seed: u64,
    substream_id: u64,
    counter: u64,
}

impl DeterministicStream {
    /// Stream for `(seed, substream_id)` positioned at its first draw.
    pub fn new(seed: u64, substream_id: u64) -> Self {
        Self {
            seed,
            substream_id,
            counter: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn substream_id(&self) -> u64 {
        self.substream_id
    }

    /// Number of raw draws consumed so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Philox 2x64-10 block: bijective scramble of (counter, substream)
    /// keyed by the seed. We emit the first output word per draw.
    fn next_bits(&mut self) -> u64 {
        let mut x0 = self.counter;
        let mut x1 = self.substream_id;
        let mut key = self.seed;
        for _ in 0..PHILOX_ROUNDS {
            let prod = (x0 as u128) * (PHILOX_M as u128);
            let hi = (prod >> 64) as u64;
            let lo = prod as u64;
            x0 = hi ^ key ^ x1;
            x1 = lo;
            key = key.wrapping_add(PHILOX_W);
        }
        self.counter += 1;
        x0
    }

    /// Uniform variate strictly inside (0, 1).
    ///
    /// Top 52 bits of the block, offset by half a lattice spacing:
    /// `(k + 0.5) * 2^-52` is exactly representable for every k < 2^52, so
    /// the result can never round onto 0 or 1.
    pub fn next_uniform(&mut self) -> f64 {
        let k = self.next_bits() >> 12;
        (k as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }

    /// Exp(1) variate: `-ln(1 - u)`.
    pub fn next_exponential(&mut self) -> f64 {
        let u = self.next_uniform();
        -math::ln(1.0 - u)
    }

    /// Standard normal variate via the fixed inverse-CDF approximation.
    pub fn next_gaussian(&mut self) -> f64 {
        math::normal_quantile(self.next_uniform())
    }
}
