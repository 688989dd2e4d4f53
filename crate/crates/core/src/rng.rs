//! Seed plumbing shared by every randomized operation.
//!
//! All randomness in the crate flows from explicit `u64` seeds through
//! ChaCha12 streams. Sub-streams (per replication, per chain) are derived by
//! hashing the seed together with the stream coordinates, so that worker
//! scheduling can never change which stream a unit of work consumes.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

const TWO_NEG53: f64 = 1.0 / 9007199254740992.0;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Collapses a seed plus stream coordinates into a single derived seed.
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut state = 0x243F_6A88_85A3_08D3;
    let mut acc: u64 = 0;
    for &p in parts {
        state ^= p;
        acc = splitmix64(&mut state) ^ acc.rotate_left(17);
    }
    // one extra round so short part lists still avalanche
    acc ^ splitmix64(&mut state)
}

/// Deterministic generator for the given seed.
pub fn stream(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Uniform draw strictly inside (0, 1).
///
/// Uses the centre of a 2^-53 lattice cell so neither endpoint is reachable.
pub fn uniform_open(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * TWO_NEG53
}

/// Standard normal draw via Box–Muller (one variate per call).
pub fn standard_normal(rng: &mut impl RngCore) -> f64 {
    let u1 = uniform_open(rng);
    let u2 = uniform_open(rng);
    (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
}
