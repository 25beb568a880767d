//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`).
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Scalar")
    }

    /// Converts a 1-based index or count.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable in every Scalar")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::of(2.0)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `x^e`, using exact multiplication for the small integer exponents that
/// dominate the common parameter choices.
#[inline]
pub(crate) fn pow<S: Scalar>(x: S, e: S) -> S {
    if e == S::one() {
        x
    } else if e == S::two() {
        x * x
    } else if e == S::zero() {
        S::one()
    } else {
        x.powf(e)
    }
}
