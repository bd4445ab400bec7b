//! Scalar abstraction so jet arithmetic can run over `f64` (default) or
//! exact rationals (test mode).

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub trait Scalar:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_integer(n: i64) -> Self;
    /// `false` only for non-finite floats; exact types are always finite.
    fn is_finite_scalar(&self) -> bool;
}

impl Scalar for f64 {
    fn from_integer(n: i64) -> Self {
        n as f64
    }

    fn is_finite_scalar(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for BigRational {
    fn from_integer(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_finite_scalar(&self) -> bool {
        true
    }
}
