//! Seed derivation.
//!
//! Every random decision is drawn from a generator keyed by
//! `(master seed, subsystem tag, index)`. Nothing depends on the order in
//! which edges arrive or subsystems run, which is what makes the stream
//! summary invariant under permutations of the stream body.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// The splitmix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const fn fnv1a(tag: &str) -> u64 {
    let bytes = tag.as_bytes();
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    let mut i = 0;
    while i < bytes.len() {
        h ^= bytes[i] as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
        i += 1;
    }
    h
}

/// Derives the sub-seed for `(tag, idx)` under `master`.
#[inline]
pub fn derive(master: u64, tag: &str, idx: u64) -> u64 {
    mix64(mix64(master ^ fnv1a(tag)) ^ idx.wrapping_mul(GOLDEN))
}

/// Like [`derive`] with a two-part index.
#[inline]
pub fn derive2(master: u64, tag: &str, a: u64, b: u64) -> u64 {
    mix64(derive(master, tag, a) ^ b.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// Uniform in `[0, 1)` from 53 bits of a hash.
#[inline]
pub fn unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Hash-based Bernoulli membership: stateless, so the same vertex gets the
/// same answer no matter when or how often it is asked.
#[inline]
pub fn coin(master: u64, tag: &str, idx: u64, p: f64) -> bool {
    p >= 1.0 || (p > 0.0 && unit(derive(master, tag, idx)) < p)
}

pub fn rng_for(master: u64, tag: &str, idx: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, tag, idx))
}

pub fn rng_for2(master: u64, tag: &str, a: u64, b: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive2(master, tag, a, b))
}
