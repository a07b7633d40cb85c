//! Seeded random streams.
//!
//! Every random generator in the crate takes an explicit `u64` seed. Independent
//! sub-streams are derived from one seed by selecting a ChaCha stream id, so the
//! draws of one component never shift the draws of another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream ids used inside the crate.
pub(crate) mod streams {
    pub const EDGES: u64 = 1;
    pub const POINTS: u64 = 2;
    pub const LANCZOS: u64 = 4;
}

/// Random stream `stream` of the generator seeded with `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
