//! Scalar abstraction shared by every geometric routine in the crate.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the mapping pipeline can run on: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Tolerance used when validating rotation matrices.
    const ORTHO_TOL: Self;

    /// Converts an `f64` literal. Every `f64` is representable (possibly rounded).
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 converts to any Real")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }

    /// `floor` as an integer, saturating; NaN maps to `i64::MIN`. Avoids a
    /// libm call on targets without a rounding instruction.
    #[inline]
    fn floor_i64(self) -> i64 {
        match self.to_i64() {
            Some(i) if Self::from_i64(i).is_some_and(|f| f > self) => i - 1,
            Some(i) => i,
            None if self > Self::zero() => i64::MAX,
            None => i64::MIN,
        }
    }
}

impl Real for f32 {
    const ORTHO_TOL: Self = 1e-4;
}

impl Real for f64 {
    const ORTHO_TOL: Self = 1e-9;
}
