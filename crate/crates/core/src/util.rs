//! Small numeric and RNG helpers shared across modules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type ChainRng = ChaCha8Rng;

/// Words reserved for each sweep inside a chain's stream.
const WORDS_PER_SWEEP: u128 = 1 << 36;

/// Counter-based substream: the ChaCha key comes from `seed`, the stream id
/// is the chain index and the sweep selects a disjoint block of the stream.
pub fn substream(seed: u64, chain: u64, sweep: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain);
    rng.set_word_pos(sweep as u128 * WORDS_PER_SWEEP);
    rng
}

/// Index drawn with probability proportional to `weights` (nonnegative).
pub fn sample_categorical<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    debug_assert!(total > 0.0 && total.is_finite(), "bad weights {weights:?}");
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    // rounding can leave u marginally above the last weight
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(weights.len() - 1)
}

pub fn log_sum_exp(x: &[f64]) -> f64 {
    let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

pub fn normalize_log_weights(logw: &[f64]) -> Vec<f64> {
    let lse = log_sum_exp(logw);
    logw.iter().map(|v| (v - lse).exp()).collect()
}

pub fn sample_log_categorical<R: Rng + ?Sized>(logw: &[f64], rng: &mut R) -> usize {
    sample_categorical(&normalize_log_weights(logw), rng)
}
