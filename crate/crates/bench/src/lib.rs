//! Shared inputs for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` vectors of length `n` with entries uniform in [0, 1).
pub fn uniform_batch(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen()).collect())
        .collect()
}

/// Integer-valued vectors with entries in 0..=max, ties included.
pub fn integer_batch(n: usize, count: usize, max: u32, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=max) as f64).collect())
        .collect()
}
