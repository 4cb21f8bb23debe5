//! Exact ordered-field scalars.
//!
//! Everything downstream is generic over [`Field`], which is implemented by
//! [`Rational`] (arbitrary precision fractions) and [`QuadraticNumber`]
//! (elements `a + b*sqrt2` of Q(sqrt2)). No floating point is used for any
//! decision; [`Field::to_f64`] exists only for rendering.

mod quadratic;
mod rational;

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

pub use quadratic::QuadraticNumber;
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar {input:?}: {reason}")]
pub struct ParseScalarError {
    pub input: String,
    pub reason: &'static str,
}

impl ParseScalarError {
    pub(crate) fn new(input: &str, reason: &'static str) -> Self {
        Self {
            input: input.to_string(),
            reason,
        }
    }
}

/// An exact ordered field.
///
/// `Div` panics on a zero divisor, like integer division; use
/// [`Field::checked_div`] or [`Field::inv`] where the divisor is not known to
/// be nonzero.
pub trait Field:
    Clone
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + FromStr<Err = ParseScalarError>
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;

    /// -1, 0 or +1.
    fn signum(&self) -> i8;

    fn inv(&self) -> Result<Self, ArithError>;

    /// `Some` when the value lies in Q.
    fn to_rational(&self) -> Option<Rational>;

    /// Lossy conversion for display output only.
    fn to_f64(&self) -> f64;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_int(n))
    }

    fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(self.clone() * &rhs.inv()?)
    }

    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

/// Sum of a slice of field elements.
pub fn sum<F: Field>(values: &[F]) -> F {
    values.iter().fold(F::zero(), |acc, v| acc + v)
}

/// Dot product; panics if lengths differ.
pub fn dot<F: Field>(x: &[F], y: &[F]) -> F {
    assert_eq!(x.len(), y.len(), "dot product of unequal lengths");
    x.iter()
        .zip(y)
        .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b)
}
