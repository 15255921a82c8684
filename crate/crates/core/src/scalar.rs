//! Scalar abstraction: numeric kernels are generic over the floating-point
//! type through [`Real`], with `f64`-backed aliases used everywhere else.

use num_complex::Complex;
use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};
use std::fmt::Debug;

/// Floating-point scalar usable in the numeric kernels (gamma evaluation,
/// quadrature nodes). Implemented by `f32` and `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static
{
    /// Convenience lift from `f64` literals.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static
{
}

/// Default real scalar for the library's public API.
pub type F = f64;

/// Default complex scalar for the library's public API.
pub type C = Complex<F>;
