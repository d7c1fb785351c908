//! Deterministic random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream whose
//! 64-bit seed is derived from a root seed and a list of integer tags (pair
//! index, role, trial, state key, ...) with the SplitMix64 finalizer. Streams
//! are therefore independent of scheduling and identical across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type DetRng = ChaCha8Rng;

/// Stream tags used by the crate. Keeping them in one place avoids two
/// subsystems accidentally sharing a stream.
pub mod tags {
    pub const ELO: u64 = 0x454c_4f00;
    pub const NOISE: u64 = 0x4e4f_4953;
    pub const DISC: u64 = 0x4449_5343;
    pub const GOS_W: u64 = 0x474f_5357;
    pub const GOS_S: u64 = 0x474f_5353;
    pub const LAYERED: u64 = 0x4c41_5952;
    pub const AGENT: u64 = 0x4147_4e54;
    pub const MCTS: u64 = 0x4d43_5453;
    pub const TRAIN: u64 = 0x5452_4e00;
    pub const DRIFT: u64 = 0x4452_4654;
}

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `tags` into `seed`. Order matters: `[a, b]` and `[b, a]` give
/// different streams.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix64(seed), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}

/// Mixes a 128-bit state key into a seed.
pub fn derive_seed_u128(seed: u64, tag: u64, key: u128) -> u64 {
    derive_seed(seed, &[tag, key as u64, (key >> 64) as u64])
}

pub fn stream(seed: u64, tags: &[u64]) -> DetRng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, tags))
}
