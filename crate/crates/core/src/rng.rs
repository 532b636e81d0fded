//! Seeded random streams.
//!
//! Every random quantity in the crate is drawn from a [`RandomStream`], a
//! ChaCha8 keystream addressed by `(seed, stream)`. ChaCha is counter based,
//! so vertex `i` of an instance always reads the same keystream regardless
//! of the order in which vertices (or trials) are generated.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Odd constant of the SplitMix64 increment (2^64 / golden ratio).
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function applied to `x + GOLDEN_GAMMA`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of 64-bit words into a seed.
///
/// `h_0 = seed`, `h_{k+1} = splitmix64(h_k XOR w_k)`; the result is the last
/// `h`. Floats are passed as their IEEE-754 bit patterns, integers as-is.
pub fn derive_seed(seed: u64, words: &[u64]) -> u64 {
    words.iter().fold(seed, |h, &w| splitmix64(h ^ w))
}

#[derive(Clone, Debug)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent stream `stream` under the same key.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(rand_distr::StandardNormal)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Keyed per-vertex streams sharing one ChaCha key setup.
    pub(crate) fn streams(seed: u64) -> StreamFactory {
        StreamFactory {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

pub(crate) struct StreamFactory {
    base: ChaCha8Rng,
}

impl StreamFactory {
    pub(crate) fn stream(&self, index: u64) -> RandomStream {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng.set_word_pos(0);
        RandomStream { rng }
    }
}
