//! Scalar abstraction over the number types the evaluation layer runs on.
//!
//! Trajectory evaluation, policy evaluation and the bimatrix assembly are
//! written once over [`Scalar`] and instantiated at `f32`/`f64` for fast
//! approximate work and at [`BigRational`] wherever values feed the exact
//! pivoting solver.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

/// Field operations plus exact conversion to and from `f64`.
///
/// `from_f64` must be exact for every finite `f64` the type can represent;
/// for rationals that is every finite `f64` (binary floats are dyadic
/// rationals), for `f32` it is the usual narrowing conversion.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_f64(value: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact rational image of this value. For floats this is the dyadic
    /// rational of the bit pattern, not a decimal re-parse.
    fn to_rational(&self) -> BigRational;

    fn abs(&self) -> Self;

    /// Nonnegative integer power by repeated squaring.
    fn powu(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Scalar for f64 {
    fn from_f64(value: f64) -> Self {
        value
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self)
            .unwrap_or_else(|| panic!("non-finite value {self} has no rational image"))
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

impl Scalar for f32 {
    fn from_f64(value: f64) -> Self {
        value as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn to_rational(&self) -> BigRational {
        Scalar::to_f64(self).to_rational()
    }

    fn abs(&self) -> Self {
        f32::abs(*self)
    }
}

impl Scalar for BigRational {
    fn from_f64(value: f64) -> Self {
        BigRational::from_float(value)
            .unwrap_or_else(|| panic!("non-finite value {value} has no rational image"))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).expect("rational outside f64 range")
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

/// Rational with numerator/denominator `i64`, handy in tests.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}
