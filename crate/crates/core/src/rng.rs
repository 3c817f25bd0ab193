//! Seeded random streams.
//!
//! Every random quantity is drawn from a ChaCha8 stream keyed by the user seed
//! and a stream id built from `(level, purpose)`. Streams never share state,
//! so adding a level to a construction leaves the draws of earlier levels
//! untouched.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. The discriminant is part of the stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Poisson = 1,
    OrderKey = 2,
    Accept = 3,
    Radii = 4,
    Sampling = 5,
    Space = 6,
}

pub fn stream(seed: u64, level: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((level << 8) | purpose as u64);
    rng
}

/// Uniform in `[0, 1)` with 53 bits of resolution.
pub fn unit_closed_open<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in `(0, 1]`. Exact zero is excluded, so `phi = 0` always rejects.
pub fn unit_open_closed<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}
