//! Scalar abstraction for the numerical kernels.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the whole crate is generic over.
///
/// `f32` and `f64` both qualify. The documented default tolerances assume
/// `f64`; callers running at `f32` should loosen them accordingly.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant into the working scalar type.
pub(crate) fn real<T: Scalar>(value: f64) -> T {
    T::from_f64(value).expect("constant representable in scalar type")
}

/// Converts a count into the working scalar type.
pub(crate) fn count<T: Scalar>(value: usize) -> T {
    T::from_usize(value).expect("count representable in scalar type")
}
