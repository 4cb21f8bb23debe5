use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ArithError, Field, ParseScalarError};

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Lowest-terms check used by debug assertions and property tests.
    pub fn is_canonical(&self) -> bool {
        use num_integer::Integer;
        self.denom().is_positive() && self.numer().gcd(self.denom()).is_one()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    fn wrap(r: BigRational) -> Self {
        let out = Rational(r);
        debug_assert!(out.is_canonical());
        out
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseScalarError::new(s, "empty"));
        }
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let valid = |t: &str, allow_sign: bool| {
            let digits = if allow_sign {
                t.strip_prefix(['-', '+']).unwrap_or(t)
            } else {
                t
            };
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid(num, true) || !valid(den, false) {
            return Err(ParseScalarError::new(s, "expected p/q or p"));
        }
        let num: BigInt = num
            .parse()
            .map_err(|_| ParseScalarError::new(s, "bad numerator"))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| ParseScalarError::new(s, "bad denominator"))?;
        Rational::from_bigints(num, den).map_err(|_| ParseScalarError::new(s, "zero denominator"))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational::wrap((self.0).$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational::wrap((self.0).$method(&rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational::wrap((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }

    fn one() -> Self {
        Rational(BigRational::one())
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn signum(&self) -> i8 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    fn inv(&self) -> Result<Self, ArithError> {
        if self.0.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn add_and_canonicalize() {
        assert_eq!(r("1/3") + r("1/6"), r("1/2"));
        assert_eq!(r("2/4") * r("1"), r("1/2"));
        assert_eq!(r("2/4").to_string(), "1/2");
        assert_eq!(r("-6/3").to_string(), "-2");
    }

    #[test]
    fn compare_by_cross_multiplication() {
        // 3*52 = 156 > 155 = 5*31
        assert_eq!(r("3/5").cmp(&r("31/52")), Ordering::Greater);
        assert_eq!(r("-1/2").cmp(&r("0")), Ordering::Less);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(r("1").checked_div(&r("0")), Err(ArithError::DivisionByZero));
        assert_eq!(r("0").inv(), Err(ArithError::DivisionByZero));
        assert_eq!(r("3/4").checked_div(&r("3/2")).unwrap(), r("1/2"));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1/0", "a", "1/2/3", "1.5", "1/-2", "--1", "/2", "2/"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }
}
