//! Scalar abstraction: the whole library is generic over the floating type.

use nalgebra::RealField;
use num_traits::FromPrimitive;

/// Floating scalar the geometry is written against: f32 or f64.
pub trait Real: RealField + FromPrimitive + Copy {}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand to pull an `f64` literal into the generic scalar type.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal must be representable")
}

/// Half of a scalar.
#[inline]
pub fn half<T: Real>(x: T) -> T {
    x / lit::<T>(2.0)
}

/// Clamp into [-1, 1] before an inverse trigonometric call.
#[inline]
pub fn clamp_unit<T: Real>(x: T) -> T {
    x.min(T::one()).max(-T::one())
}
