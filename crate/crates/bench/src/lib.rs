//! Deterministic inputs shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superbase_core::{sample, Ordinal};

/// `count` random ordinals of depth at most 4 from a fixed seed.
pub fn ordinals(count: usize) -> Vec<Ordinal> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..count)
        .map(|_| sample::random_ordinal(&mut rng, 4, 3, 1_000_000))
        .collect()
}

/// `count` random trees of depth at most 4 with at most 12 nodes.
pub fn trees(count: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x74ee);
    (0..count)
        .map(|_| sample::random_tree(&mut rng, 4, 12))
        .collect()
}
