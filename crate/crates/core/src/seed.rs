//! Deterministic seed derivation.
//!
//! A replica seed is a stable 64-bit hash of the master seed, a stream tag
//! (experiment kind and sweep position) and the replica index. The mixer is
//! the SplitMix64 finalizer, which is fixed and platform independent.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of words into one seed.
pub fn hash_words(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x6A09_E667_F3BC_C909, |acc, &w| mix64(acc ^ mix64(w)))
}

/// FNV-1a over a tag string, used to turn names into stream words.
pub fn tag_word(tag: &str) -> u64 {
    tag.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Master seed for one stream of an experiment. Sweeps that must share
/// configurations (common random numbers over `r`) use the same `sweep`.
pub fn stream_seed(master_seed: u64, experiment_kind: &str, sweep: u64) -> u64 {
    hash_words(&[master_seed, tag_word(experiment_kind), sweep])
}

pub fn replica_seed(master_seed: u64, replica: u64) -> u64 {
    hash_words(&[master_seed, replica])
}

pub fn replica_rng(master_seed: u64, replica: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(replica_seed(master_seed, replica))
}
