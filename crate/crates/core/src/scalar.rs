//! Floating-point scalar abstraction.
//!
//! Everything that samples a net (expression evaluation, seminorm grids,
//! tail checks) is generic over [`Scalar`]. Exponents and coefficients of
//! scale elements stay exact as [`Rational`].

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Exact rational used for constants, exponents and coefficients.
pub type Rational = Rational64;

/// Floating point type a net is sampled in: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Nearest representable value of an exact rational.
    fn from_rational(r: Rational) -> Self {
        Self::from_i64(*r.numer()).unwrap() / Self::from_i64(*r.denom()).unwrap()
    }

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(Self::nan)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Relative slack granted to `a <= b` comparisons of sampled values, in ulps.
///
/// Two routes to the same real number (say `(1/λ)·(1/λ)` and `λ^-2`) may round
/// differently; a handful of ulps absorbs that without hiding any genuine
/// asymptotic gap.
pub const ROUNDING_ULPS: u32 = 4;

/// `a <= b` up to [`ROUNDING_ULPS`] of relative rounding slack.
pub fn le_rounded<T: Scalar>(a: T, b: T) -> bool {
    if a <= b {
        return true;
    }
    let slack = T::epsilon() * T::from_u32(ROUNDING_ULPS).unwrap();
    a.is_finite() && b.is_finite() && a - b <= b.abs() * slack
}
