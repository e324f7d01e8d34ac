//! Counter-based seed derivation.
//!
//! Child seeds are a pure function of `(parent, stream, index)` so that
//! parallel sampling reproduces the sequential result bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator used for every random choice in the crate.
pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a parent seed with a stream tag and a counter.
pub fn derive(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(stream)).wrapping_add(index))
}

/// Stream tags keep independent consumers of one seed apart.
pub mod stream {
    pub const DRAW: u64 = 0x01;
    pub const HAAR: u64 = 0x02;
    pub const PLAN: u64 = 0x03;
    pub const ORACLE: u64 = 0x04;
    pub const FALLBACK: u64 = 0x05;
    pub const TRIAL: u64 = 0x06;
    pub const EIGENPHASE: u64 = 0x07;
    pub const BOOTSTRAP: u64 = 0x08;
    pub const SIGN: u64 = 0x09;
}

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

pub fn child_rng(seed: u64, stream: u64, index: u64) -> Rng {
    rng(derive(seed, stream, index))
}
