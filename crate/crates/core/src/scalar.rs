//! Floating-point scalar abstraction used by every approximate quantity in the crate.
//!
//! Exact quantities live in [`crate::oracles::ExactProbability`]; anything that is an
//! estimate, a confidence bound, a fitted slope or a Stirling-type approximation is
//! computed generically over [`Scalar`] so callers can pick `f32` or `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point: f32 or f64.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from a count or an `f64` constant.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 converts to every Scalar")
    }

    fn of_count(count: u64) -> Self {
        Self::of(count as f64)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
