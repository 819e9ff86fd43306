//! Seeded randomness streams.
//!
//! Every randomized routine takes a single master seed and derives labeled
//! child streams from it, so that the two chains of a paired run (and any
//! warm-up phase) draw from independent generators while the run as a whole
//! stays a pure function of the master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

/// Labels for the streams split off a master seed.
pub mod label {
    pub const CHAIN_A: &str = "chain-a";
    pub const CHAIN_B: &str = "chain-b";
    pub const WARM_UP: &str = "warm-up";
    pub const START: &str = "start";
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Seed of the child stream `label` of `master`.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    splitmix64(master ^ splitmix64(fnv1a(label.as_bytes())))
}

/// Seed of the `index`-th replicate/phase/batch under `master`.
pub fn derive_indexed(master: u64, label: &str, index: u64) -> u64 {
    splitmix64(derive_seed(master, label).wrapping_add(splitmix64(index)))
}

pub fn stream(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}
