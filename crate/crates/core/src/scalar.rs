//! Numeric trait bound shared by every solver in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use ndarray::{LinalgScalar, ScalarOperand};
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar usable by the path solvers (`f32`, `f64`).
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + LinalgScalar
    + ScalarOperand
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from a count.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `log(1 + exp(x))` without overflow.
    #[inline]
    fn softplus(self) -> Self {
        let zero = Self::zero();
        if self > zero {
            self + (-self).exp().ln_1p()
        } else {
            self.exp().ln_1p()
        }
    }

    /// Logistic function `1 / (1 + exp(-x))` without overflow.
    #[inline]
    fn sigmoid(self) -> Self {
        let one = Self::one();
        if self >= Self::zero() {
            one / (one + (-self).exp())
        } else {
            let e = self.exp();
            e / (one + e)
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softplus_is_stable_at_extremes() {
        assert!((700.0f64.softplus() - 700.0).abs() < 1e-12);
        assert!((-700.0f64).softplus() >= 0.0);
        assert!(((0.0f64).softplus() - 2f64.ln()).abs() < 1e-15);
        assert!((800.0f32).softplus().is_finite());
    }

    #[test]
    fn sigmoid_symmetry() {
        for &x in &[-30.0f64, -1.0, 0.0, 0.5, 40.0] {
            assert!((x.sigmoid() + (-x).sigmoid() - 1.0).abs() < 1e-15);
        }
    }
}
