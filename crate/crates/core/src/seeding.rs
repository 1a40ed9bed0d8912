//! Counter-based derivation of random streams from one 64-bit seed.
//!
//! A stream is a ChaCha8 generator keyed by `(seed, purpose)` and positioned
//! on the ChaCha stream `index`. Every draw in the toolkit is a pure function
//! of `(seed, purpose, index)`, so results do not depend on thread count or
//! evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. Each purpose gets an independent key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    MonteCarloPoints = 1,
    Bootstrap = 2,
    SummaryPoints = 3,
    RidgeTrain = 4,
    RidgeTest = 5,
    GradientCheck = 6,
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream(seed: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = seed ^ mix(purpose as u64);
    for chunk in key.chunks_exact_mut(8) {
        state = mix(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Point `index` drawn uniformly from `[-1, 1]^dim`.
pub fn uniform_point(seed: u64, purpose: Purpose, index: u64, dim: usize) -> Vec<f64> {
    let mut rng = stream(seed, purpose, index);
    (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect()
}
