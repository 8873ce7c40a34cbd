//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Floating-point scalar the dynamics, measures and certificates are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances in the crate are written as
/// `f64` literals and converted with [`Real::lit`].
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lower and upper bounds on a running vector norm before it is folded
    /// into a log accumulator.
    fn renorm_bounds() -> (Self, Self);

    fn lit(v: f64) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("literal representable in scalar type")
    }

    fn from_usize(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("count representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Reduce into `[0, 1)`.
    fn frac_unit(self) -> Self {
        let r = self - self.floor();
        if r >= Self::one() {
            Self::zero()
        } else {
            r
        }
    }
}

impl Real for f64 {
    fn renorm_bounds() -> (Self, Self) {
        (1e-100, 1e100)
    }
}

impl Real for f32 {
    fn renorm_bounds() -> (Self, Self) {
        (1e-15, 1e15)
    }
}

/// Default guard on `|Df_x(v)|` and on `|det Df_x|`.
pub const CRITICAL_EPS: f64 = 1e-12;

/// Per-coordinate tolerance used when merging atoms of finitely supported measures.
pub const MERGE_TOL: f64 = 1e-12;
