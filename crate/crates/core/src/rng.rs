//! Seeded random streams.
//!
//! Every random draw in the crate comes from ChaCha8 seeded with
//! `seed_from_u64(seed)` and switched to stream `s` with `set_stream(s)`.
//! Unit-interval floats take the top 53 bits of `next_u64`, so draws depend
//! only on `(seed, stream)` and are identical on every platform.

pub use rand_chacha::rand_core::{RngCore, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform in `[0, 1)`.
#[inline]
pub fn unit_interval(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in `lo..=hi`.
pub fn range_inclusive(rng: &mut impl RngCore, lo: u64, hi: u64) -> u64 {
    debug_assert!(lo <= hi);
    let span = hi - lo + 1;
    lo + (unit_interval(rng) * span as f64) as u64 % span
}
