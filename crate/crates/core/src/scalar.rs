//! Exact scalar rings used for matrix entries and polynomial coefficients.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{FromPrimitive, One, Zero};

/// A commutative ring with exact arithmetic.
///
/// Implemented for every type that provides the listed operations, which
/// covers the primitive signed integers, `num_bigint::BigInt` and
/// `num_rational::Ratio`. Floating point types also satisfy the bounds but
/// are never used by this crate.
pub trait Ring:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + FromPrimitive
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("ring cannot represent a small integer")
    }

    fn is_negative_unit(&self) -> bool {
        *self == -Self::one()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + Display
        + PartialEq
        + PartialOrd
        + Zero
        + One
        + FromPrimitive
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Send
        + Sync
{
}
