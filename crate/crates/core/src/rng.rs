//! Counter-based random substreams.
//!
//! Every random draw in the crate is addressed by `(seed, domain, index)`:
//! the seed and domain select a ChaCha key, the index selects the ChaCha
//! stream. A shot therefore sees the same numbers no matter which thread
//! evaluates it or in which order shots are visited.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent consumers of randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Domain {
    Sampling = 1,
    Readout = 2,
    Trajectory = 3,
    Twirl = 4,
    Dephasing = 5,
    Restart = 6,
    Cell = 7,
    Evaluation = 8,
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from a parent seed and an index (e.g. sweep cells).
pub fn derive_seed(seed: u64, domain: Domain, index: u64) -> u64 {
    mix64(mix64(seed ^ mix64(domain as u64)) ^ index)
}

/// Generator for one `(seed, domain, index)` substream.
pub fn substream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed ^ mix64(domain as u64)));
    rng.set_stream(index);
    rng
}
