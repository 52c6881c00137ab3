//! Scalar abstraction shared by every real-valued quantity in the circuit.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real number type the circuit is generic over. Implemented for `f32` and `f64`.
///
/// `Display` must print a representation that `FromStr` parses back to the
/// same value; the archive format relies on it.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Display + Debug + FromStr + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only for values unrepresentable as `Self`,
    /// which never happens for the finite constants used in this crate.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to scalar")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to scalar")
    }

    #[inline]
    fn hundred() -> Self {
        Self::of(100.0)
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Display + Debug + FromStr + Default + Send + Sync + 'static
{
}

/// `ceil(fraction * n)` with a guard against products like `0.2 * 25`
/// landing one ulp above an integer.
pub fn ceil_count<T: Scalar>(fraction: T, n: usize) -> usize {
    let x = fraction.to_f64().unwrap_or(0.0) * n as f64;
    let nearest = x.round();
    let tol = 8.0 * T::epsilon().to_f64().unwrap_or(f64::EPSILON) * (1.0 + x.abs());
    let v = if (x - nearest).abs() <= tol { nearest } else { x.ceil() };
    v.max(0.0) as usize
}

/// Percentage `100 * part / whole` evaluated so that integer ratios such as
/// 199/200 come out exact.
pub fn percent<T: Scalar>(part: usize, whole: usize) -> T {
    if whole == 0 {
        return T::hundred();
    }
    T::of_usize(100 * part) / T::of_usize(whole)
}
