//! Scalar abstractions.
//!
//! The exponent calculus is generic over the integer type backing its exact
//! rationals, the numerical modules over the floating point type.

use std::fmt::{Debug, Display, LowerExp};
use std::hash::Hash;
use std::iter::Sum;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Float, FromPrimitive, NumAssign, Signed, ToPrimitive};

/// Integer type usable under an exact rational: `BigInt` for unbounded
/// exactness, `i64`/`i128` when the inputs are known to stay small.
pub trait ExactInt:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + FromStr + Hash + Send + Sync + 'static
{
}

impl<T> ExactInt for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Hash
        + Send
        + Sync
        + 'static
{
}

/// floating point: f32 or f64
pub trait Real: Float + FromPrimitive + NumAssign + Sum + Debug + Display + LowerExp + Send + Sync + 'static {
    /// Lossy conversion from `f64`, used for constants.
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
