//! Floating-point abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type the numerical core is written against: `f32`, `f64`, or
/// with the `f128` feature, quad precision.
///
/// Quadrature, contour and optimizer tolerances are expressed in the same
/// type, so `f32` instantiations should be given tolerances above
/// `f32::EPSILON`.
pub trait Scalar:
    Float + NumAssign + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy conversion used when a value is stored in an error or report.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(feature = "f128")]
impl Scalar for f128::f128 {}

/// `sech(x)` without overflowing for large `|x|`.
#[inline]
pub(crate) fn sech<T: Scalar>(x: T) -> T {
    let ax = x.abs();
    if ax > T::lit(20.0) {
        let e = (-ax).exp();
        T::lit(2.0) * e / (T::one() + e * e)
    } else {
        T::one() / x.cosh()
    }
}
