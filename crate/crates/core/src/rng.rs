//! Deterministic random streams.
//!
//! Every stream is a ChaCha8 generator seeded with `seed_from_u64(master)`
//! and switched to stream number `key` with `set_stream`. ChaCha is counter
//! based, so each `(master, key)` pair names an independent 2^64-block stream
//! whose output does not depend on thread count or evaluation order.
//!
//! Symbols are drawn by inversion: `u = (next_u64() >> 11) * 2^-53` and the
//! symbol is the first index whose cumulative probability exceeds `u`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn stream(master_seed: u64, key: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(key);
    rng
}

/// SplitMix64 finaliser applied to `master ^ golden * (index + 1)`; used to
/// give each point of a parameter sweep its own master seed.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws symbols by inversion of the cumulative distribution.
#[derive(Debug, Clone)]
pub struct SymbolSampler {
    cumulative: Vec<f64>,
}

impl SymbolSampler {
    pub fn new(probs: &[f64]) -> Self {
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        // rounding in the running sum must not leave a gap below 1.0
        if let Some(last) = probs.iter().rposition(|&p| p > 0.0) {
            cumulative[last] = f64::INFINITY;
        }
        SymbolSampler { cumulative }
    }

    #[inline]
    pub fn sample<R: RngCore>(&self, rng: &mut R) -> u8 {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cumulative.len() - 1) as u8
    }

    pub fn fill<R: RngCore>(&self, rng: &mut R, out: &mut [u8]) {
        for s in out {
            *s = self.sample(rng);
        }
    }
}
