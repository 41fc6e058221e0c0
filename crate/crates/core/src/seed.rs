//! Deterministic seed derivation.
//!
//! Every stochastic task derives its generator from a 64-bit master seed and
//! a stable task label. The label is hashed with 64-bit FNV-1a, xored into the
//! master seed, and the result is passed through the SplitMix64 finalizer:
//!
//! ```text
//! derive(master, label) = splitmix64(master ^ fnv1a64(label))
//! ```
//!
//! Labels are plain strings such as `"mc/chunk/17"` or `"posterior/m=400/rep=3"`,
//! so streams never depend on worker count or scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `(master, label)`.
pub fn derive(master: u64, label: &str) -> u64 {
    splitmix64(master ^ fnv1a64(label.as_bytes()))
}

/// Generator for the task `label` under `master`.
pub fn rng_for(master: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, label))
}
