//! Seeded randomness.
//!
//! Every random draw in the crate comes from [`SimRng`], the ChaCha stream cipher
//! reduced to 8 rounds (Bernstein, "ChaCha, a variant of Salsa20"), seeded through
//! `SeedableRng::seed_from_u64`. Its output is identical across platforms, so a
//! recorded seed reproduces a run bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer. Used to derive independent child seeds from a parent seed.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed `index` of `parent`: `mix64(mix64(parent) ^ mix64(index + 1))`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    mix64(mix64(parent) ^ mix64(index.wrapping_add(1)))
}
