//! Closed-form quantities for random necklaces, as exact rationals, plus their
//! Stirling-type approximations.
//!
//! Exact values are computed with big-integer factorials; nothing here rounds until a
//! caller asks for a [`Scalar`] or a decimal rendering.

pub mod factorial;

mod asymptotic;
mod entropy;
mod exact;

pub use asymptotic::fair_probability_asymptotic;
pub use entropy::{binary_entropy, entropy_threshold, inverse_binary_entropy, ENTROPY_TOLERANCE};
pub use exact::{
    balanced_partition_count_bound, collision_probability, composition_probability,
    compositions, expected_fair_scut, fair_probability_exact, m1_fair_probability,
    pair_fair_probability, s_cut_partition_count, ExactProbability,
};

use crate::scalar::Scalar;

impl ExactProbability {
    /// Nearest representable scalar.
    pub fn to_scalar<S: Scalar>(&self) -> S {
        S::of(self.to_f64())
    }
}
