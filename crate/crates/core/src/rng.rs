// SPDX-License-Identifier: Apache-2.0

//! Seed derivation. Every random stream in a campaign is derived from one
//! user seed, so results do not depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type FuzzRng = ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for `index` under `base`. Distinct indices give unrelated seeds.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    mix64(mix64(base).wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(index.wrapping_add(1))))
}

pub fn seeded(seed: u64) -> FuzzRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for the `index`-th independent task of a stream rooted at `base`.
pub fn substream(base: u64, index: u64) -> FuzzRng {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index);
    rng
}
