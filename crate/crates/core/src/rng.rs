//! Seed derivation.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded through
//! [`derive_seed`], which folds a master seed and a list of integer keys
//! (stream tag, cell index, round, vertex, ...) with the SplitMix64
//! finalizer. A stream therefore depends only on its keys, never on the
//! order in which other streams were consumed, so results do not depend
//! on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags. Kept as constants so that reimplementations can reproduce
/// the same derivations.
pub mod stream {
    pub const GENERATE: u64 = 0x6765_6e65;
    pub const LOW_RANK: u64 = 0x6c6f_7772;
    pub const IMPROVE: u64 = 0x696d_7072;
    pub const ASSIGN_TRIMMED: u64 = 0x7472_696d;
    pub const TRIAL: u64 = 0x7472_6961;
    pub const DETECT: u64 = 0x6465_7465;
}

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, keys: &[u64]) -> u64 {
    keys.iter()
        .fold(splitmix64(master), |acc, &k| splitmix64(acc ^ splitmix64(k)))
}

pub fn stream_rng(master: u64, keys: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, keys))
}
