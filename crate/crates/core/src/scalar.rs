use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the numeric kernels are written against.
///
/// Implemented for `f32` and `f64`. Every tolerance quoted in the crate
/// documentation assumes `f64`; the `f32` instantiation is usable for quick
/// exploratory runs but will not meet the 1e-10 level checks.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    /// Relative off-diagonal threshold used to stop Jacobi sweeps.
    fn jacobi_tolerance() -> Self {
        Self::lit(1e-13).max(Self::epsilon() * Self::lit(64.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}
