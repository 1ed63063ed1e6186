//! The single pseudorandom generator used throughout the crate.
//!
//! Every stochastic component (uniform scheduler, star-protocol coin tosses,
//! random graph and profile generators) draws from a [`SimRng`] seeded from a
//! `u64`. ChaCha8 gives a portable, platform-independent stream, so a run is
//! reproducible from its recorded seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn sim_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
