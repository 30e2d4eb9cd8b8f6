//! Scalar abstraction for the closed-form analysis layer.
//!
//! The stability and normal-form routines are written against the [`Real`]
//! trait so they can be evaluated at `f32` (fast parameter scans) or any
//! wider float, while the simulation stack (FFT transforms, time stepping,
//! file formats) stays fixed to `f64`.  Concrete `f64` aliases for every
//! public type live at the crate root.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar usable in the closed-form analysis routines.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Convert an `f64` literal appearing in a formula.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal not representable in scalar type")
    }

    /// Convert a small integer (mode index, counter) into the scalar type.
    #[inline]
    fn of_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer not representable in scalar type")
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}
