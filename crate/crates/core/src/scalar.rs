//! Scalar abstraction for the curve machinery.
//!
//! The analytic core (curve evaluation, tail moments, closed-form
//! approximations) is generic over the floating-point type. `f64` is the
//! precision the documented tolerances are stated for; `f32` works with
//! proportionally relaxed tolerances.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar plus the special functions the curves need.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Natural logarithm of the gamma function.
    fn ln_gamma(self) -> Self;

    /// Complementary error function.
    fn erfc(self) -> Self;

    /// Absolute tolerance used by the tail-moment quadrature.
    fn quad_tol() -> Self;

    /// Absolute tolerance for scalar root bisection.
    fn root_tol() -> Self;
}

impl Real for f64 {
    #[inline]
    fn ln_gamma(self) -> f64 {
        libm::lgamma(self)
    }

    #[inline]
    fn erfc(self) -> f64 {
        libm::erfc(self)
    }

    #[inline]
    fn quad_tol() -> f64 {
        1e-12
    }

    #[inline]
    fn root_tol() -> f64 {
        1e-12
    }
}

impl Real for f32 {
    // Route through the f64 implementations; the truncation error is far
    // below f32 round-off.
    #[inline]
    fn ln_gamma(self) -> f32 {
        libm::lgamma(self as f64) as f32
    }

    #[inline]
    fn erfc(self) -> f32 {
        libm::erfc(self as f64) as f32
    }

    #[inline]
    fn quad_tol() -> f32 {
        1e-5
    }

    #[inline]
    fn root_tol() -> f32 {
        1e-5
    }
}

/// Shorthand conversion from an `f64` literal into the generic scalar.
#[inline]
pub(crate) fn lit<S: Real>(x: f64) -> S {
    S::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Conversion from a usize count into the generic scalar.
#[inline]
pub(crate) fn count<S: Real>(n: usize) -> S {
    S::from_usize(n).expect("count representable in scalar type")
}
