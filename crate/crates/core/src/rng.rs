//! Deterministic randomness plumbing.
//!
//! All randomized checks and Monte Carlo estimators in this crate derive an
//! independent ChaCha8 stream from `(seed, index)` — per trial for checks,
//! per sampled tuple for m-forms, per call for measure integration. That
//! makes every result a pure function of its seed: identical invocations
//! reproduce bit for bit, and distinct stages never share a stream.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mix two seeds into one, SplitMix64-style.
///
/// Used to combine a measure's own base seed with a caller's stage seed, and
/// by the CLI to fan a top-level seed out to pipeline stages.
pub fn mix_seeds(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The ChaCha stream for one trial (or call) of a seeded procedure.
///
/// Stream 0 is reserved so that index 0 and the base generator never alias.
pub(crate) fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

/// Draw a random subset of `2..=n` distinct indices, ascending.
///
/// Partial Fisher–Yates over an index vector; the sort afterwards only fixes
/// the presentation order, the set itself is what matters.
pub(crate) fn draw_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    debug_assert!(n >= 2);
    let size = rng.gen_range(2..=n);
    let mut pool: Vec<usize> = (0..n).collect();
    for k in 0..size {
        let j = rng.gen_range(k..n);
        pool.swap(k, j);
    }
    pool.truncate(size);
    pool.sort_unstable();
    pool
}

/// Draw a zero-sum coefficient vector: iid standard normals minus their mean.
pub(crate) fn draw_zero_sum<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    debug_assert!(len >= 2);
    let mut c: Vec<f64> = (0..len)
        .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
        .collect();
    let mean = c.iter().sum::<f64>() / len as f64;
    for v in c.iter_mut() {
        *v -= mean;
    }
    c
}
