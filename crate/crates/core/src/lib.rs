//! Random necklace splitting.
//!
//! A necklace here is an open string of `n = ktm` beads with `km` beads of each of `t`
//! types. A set of cuts is fair when the resulting intervals can be handed to `k` thieves
//! so that every thief gets exactly `m` beads of each type. The crate provides
//!
//! - the data model and uniform sampling ([`necklace`], [`partition`]),
//! - exact minimum-cut solvers and fair-partition counting ([`solver`]),
//! - exact rational formulas and their Stirling approximations ([`oracles`]),
//! - two constructive splitting heuristics ([`heuristics`]),
//! - random-walk machinery behind the non-return estimates ([`walks`]),
//! - a seeded, thread-count independent Monte Carlo harness ([`experiments`]).
//!
//! Approximate quantities are generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the `f64` instantiation used by the command-line tool.

pub mod error;
pub mod experiments;
pub mod heuristics;
pub mod necklace;
pub mod oracles;
pub mod partition;
pub mod rng;
pub mod scalar;
pub mod solver;
pub mod stats;
pub mod walks;

pub use error::{Error, Result};
pub use necklace::{enumerate_all, generate_uniform, Bead, CountingVector, Necklace};
pub use oracles::ExactProbability;
pub use partition::{canonicalize, is_fair, partition_distance, Partition, Thief};
pub use rng::RngSeed;
pub use scalar::Scalar;
pub use solver::{
    count_fair_scut, exists_fair_with_cuts, min_cuts_exact, min_cuts_two, Witness,
};

/// Default floating-point type.
pub type Real = f64;
/// Exact rational results.
pub type Probability = ExactProbability;
pub type Estimate = stats::Estimate<Real>;
pub type LogLogFit = stats::LogLogFit<Real>;
pub type ExperimentResult = experiments::ExperimentResult<Real>;
pub type NonReturnEstimate = walks::NonReturnCurve<Real>;
