//! Scalar abstraction for edge lengths and distances.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type used for edge lengths, distances and radii.
///
/// Implemented for `f32` and `f64`. Every algorithm in the crate is generic
/// over this trait; the crate root exports `f64` aliases for the common case.
pub trait Scalar:
    Float
    + FromPrimitive
    + NumAssignOps
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal or computed constant into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 value representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// Converts a count into this type.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `log2` guarded from below by one, so `log2(1)` and `log2(0)` never yield
/// zero divisors.
pub fn log2_at_least_one(x: f64) -> f64 {
    if x <= 2.0 {
        1.0
    } else {
        x.log2().max(1.0)
    }
}

/// `log2(log2 n)` guarded from below by one.
pub fn loglog2_at_least_one(n: usize) -> f64 {
    log2_at_least_one(log2_at_least_one(n as f64))
}
