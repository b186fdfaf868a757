//! Seedable random streams.
//!
//! Every sample drawn by this crate comes from a ChaCha8 generator keyed by
//! a user seed. The key is `seed` expanded through `seed_from_u64`; the
//! ChaCha stream id is the sample index. Sample `i` of a run therefore
//! depends only on `(seed, i)`, so samples can be produced in any order or
//! in parallel and still reproduce bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

/// Stream reserved for bootstrap resampling inside estimators.
pub const BOOTSTRAP_STREAM: u64 = u64::MAX;

/// Generator for sample `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derives an independent sub-seed, e.g. one per sweep grid point.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
