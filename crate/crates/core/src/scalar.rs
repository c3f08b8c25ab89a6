//! Scalar abstraction for the closed-form formulas.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Real floating-point type accepted by the closed-form kernels (f32 or f64).
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Converts an f64 literal into `T`.
#[inline]
pub fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("literal representable")
}

/// sin(x)/x with the removable singularity filled in.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < lit(1e-4) {
        let x2 = x * x;
        T::one() - x2 / lit(6.0) + x2 * x2 / lit(120.0)
    } else {
        x.sin() / x
    }
}
