//! Scalar abstractions.
//!
//! Everything numeric in the crate is generic over [`Scalar`], which is
//! implemented for `f32` and `f64`. The certificate construction only needs
//! field arithmetic and is generic over the weaker [`Field`] trait, so it can
//! also run in exact rational arithmetic.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, NumAssign, ToPrimitive};

/// An ordered field: enough to build matrices from rational coefficients.
pub trait Field: Clone + Num + Neg<Output = Self> + PartialOrd + Debug {
    /// The value `num / den`.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

/// Floating point scalar used by the iterative methods.
pub trait Scalar:
    Field
    + Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal; panics only if the value is not representable.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable in scalar type")
    }

    /// Converts a count (iteration index, dimension) to the scalar type.
    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("usize representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Field for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
}

impl Field for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

impl Field for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_agree_across_fields() {
        let exact = BigRational::from_ratio(-2, 6);
        assert_eq!(exact, BigRational::new(BigInt::from(-1), BigInt::from(3)));
        assert!((f64::from_ratio(-2, 6) + 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(f64::from_int(7), 7.0);
        assert_eq!(BigRational::from_ratio(-3, 4).abs_value(), BigRational::from_ratio(3, 4));
    }

    #[test]
    fn literal_conversion() {
        assert_eq!(<f32 as Scalar>::of(0.5), 0.5f32);
        assert_eq!(<f64 as Scalar>::of_usize(12), 12.0);
    }
}
