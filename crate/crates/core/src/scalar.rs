//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Real floating-point scalar (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        Self::from(x).expect("literal representable in scalar type")
    }

    fn from_usize(x: usize) -> Self {
        Self::from(x).expect("integer representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }

    /// `max(floor, factor * epsilon)`: tolerances that make sense in `f64`
    /// but would sit below the unit roundoff of narrower types.
    fn tol_floor(floor: f64, factor: f64) -> Self {
        let eps = Self::epsilon().as_f64();
        Self::lit(floor.max(factor * eps))
    }
}

impl Real for f32 {}
impl Real for f64 {}
