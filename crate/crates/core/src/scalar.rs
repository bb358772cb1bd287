//! Floating-point abstraction shared by the model, solver and eigensolver.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};

/// Real scalar the solver is generic over. Implemented for `f32` and `f64`.
pub trait Scalar: Float + FloatConst + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        num_traits::cast(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    /// Lossy conversion used for diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Larger of `floor` and `factor * epsilon`, so default tolerances stay
    /// meaningful in single precision.
    #[inline]
    fn tol(floor: f64, factor: f64) -> Self {
        Self::lit(floor).max(Self::epsilon() * Self::lit(factor))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
