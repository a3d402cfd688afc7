//! Reproducible random streams.
//!
//! Every random draw in the crate comes from ChaCha8 keyed by a [`RngSeed`]:
//! the 64-bit `seed` is expanded into the ChaCha key with
//! [`SeedableRng::seed_from_u64`] and `stream` selects the ChaCha stream
//! (nonce). ChaCha output is defined on bytes, so a given `(seed, stream)` produces
//! the same sequence on every platform.
//!
//! Experiments give every Monte Carlo trial its own stream: trial `i` of cell `c`
//! uses `RngSeed { seed: cell_seed(seed, c), stream: i }`, which makes results
//! independent of how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The generator behind every sampler in the crate.
pub type NecklaceRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub const fn new(seed: u64, stream: u64) -> Self {
        RngSeed { seed, stream }
    }

    pub fn rng(self) -> NecklaceRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Seed for trial `index` of this cell.
    pub const fn trial(self, index: u64) -> RngSeed {
        RngSeed {
            seed: self.seed,
            stream: index,
        }
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        RngSeed { seed, stream: 0 }
    }
}

/// SplitMix64 finalizer.
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `cell`-th parameter cell of an experiment run with `seed`.
pub const fn cell_seed(seed: u64, cell: u64) -> RngSeed {
    RngSeed {
        seed: mix64(seed ^ mix64(cell.wrapping_add(0x9e37_79b9_7f4a_7c15))),
        stream: 0,
    }
}
