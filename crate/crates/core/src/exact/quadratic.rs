use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use super::{ArithError, Field, ParseScalarError, Rational};

/// An element `rat + irr * sqrt2` of Q(sqrt2).
///
/// Since 1 and sqrt2 are linearly independent over Q, the pair of parts is a
/// unique representation and structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadraticNumber {
    rat: Rational,
    irr: Rational,
}

impl QuadraticNumber {
    pub fn new(rat: Rational, irr: Rational) -> Self {
        QuadraticNumber { rat, irr }
    }

    pub fn sqrt2() -> Self {
        QuadraticNumber::new(Rational::zero(), Rational::one())
    }

    /// `r + 0*sqrt2`.
    pub fn embed(r: &Rational) -> Self {
        QuadraticNumber::new(r.clone(), Rational::zero())
    }

    pub fn rat_part(&self) -> &Rational {
        &self.rat
    }

    pub fn irr_part(&self) -> &Rational {
        &self.irr
    }

    /// `rat - irr * sqrt2`.
    pub fn conjugate(&self) -> Self {
        QuadraticNumber::new(self.rat.clone(), -self.irr.clone())
    }

    /// `rat^2 - 2 irr^2`, the field norm down to Q.
    pub fn norm(&self) -> Rational {
        &self.rat * &self.rat - Rational::from_int(2) * &self.irr * &self.irr
    }

    /// Exact sign of the real value.
    ///
    /// When both parts agree in sign that is the answer; otherwise the part of
    /// larger magnitude wins, decided by comparing `rat^2` with `2 irr^2`.
    pub fn sign(&self) -> i8 {
        let a = self.rat.signum();
        let b = self.irr.signum();
        if a == 0 {
            return b;
        }
        if b == 0 || a == b {
            return a;
        }
        let rat_sq = &self.rat * &self.rat;
        let irr_sq = Rational::from_int(2) * &self.irr * &self.irr;
        match rat_sq.cmp(&irr_sq) {
            Ordering::Greater => a,
            Ordering::Less => b,
            // a^2 = 2 b^2 has no nonzero rational solution
            Ordering::Equal => unreachable!("sqrt2 is irrational"),
        }
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn coeff(c: &Rational) -> String {
            if *c == Rational::one() {
                "sqrt2".into()
            } else {
                format!("{c}*sqrt2")
            }
        }
        if self.irr.is_zero() {
            return write!(f, "{}", self.rat);
        }
        if self.rat.is_zero() {
            return if self.irr.is_negative() {
                write!(f, "-{}", coeff(&-self.irr.clone()))
            } else {
                write!(f, "{}", coeff(&self.irr))
            };
        }
        if self.irr.is_negative() {
            write!(f, "{}-{}", self.rat, coeff(&-self.irr.clone()))
        } else {
            write!(f, "{}+{}", self.rat, coeff(&self.irr))
        }
    }
}

impl fmt::Debug for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadraticNumber {
    type Err = ParseScalarError;

    /// Accepts `p/q`, `r/s*sqrt2`, `p/q+r/s*sqrt2`, `p/q-r/s*sqrt2` and the
    /// shorthand `sqrt2` / `-sqrt2` / `1+sqrt2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let Some(head) = t.strip_suffix("sqrt2") else {
            return Ok(QuadraticNumber::embed(&t.parse()?));
        };
        let head = head.strip_suffix('*').unwrap_or(head);
        // split "a±b" at the last sign that is not the leading one
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (rat_str, irr_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("", head),
        };
        let rat = if rat_str.is_empty() {
            Rational::zero()
        } else {
            rat_str.parse()?
        };
        let irr_str = irr_str.strip_prefix('+').unwrap_or(irr_str);
        let irr = match irr_str {
            "" => Rational::one(),
            "-" => -Rational::one(),
            other => other
                .parse()
                .map_err(|_| ParseScalarError::new(s, "bad sqrt2 coefficient"))?,
        };
        Ok(QuadraticNumber::new(rat, irr))
    }
}

impl From<Rational> for QuadraticNumber {
    fn from(r: Rational) -> Self {
        QuadraticNumber::new(r, Rational::zero())
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other).sign().cmp(&0)
    }
}

fn add_parts(x: &QuadraticNumber, y: &QuadraticNumber) -> QuadraticNumber {
    QuadraticNumber::new(&x.rat + &y.rat, &x.irr + &y.irr)
}

fn sub_parts(x: &QuadraticNumber, y: &QuadraticNumber) -> QuadraticNumber {
    QuadraticNumber::new(&x.rat - &y.rat, &x.irr - &y.irr)
}

// (a + b r)(c + d r) = (ac + 2bd) + (ad + bc) r
fn mul_parts(x: &QuadraticNumber, y: &QuadraticNumber) -> QuadraticNumber {
    let two = Rational::from_int(2);
    QuadraticNumber::new(
        &x.rat * &y.rat + two * &x.irr * &y.irr,
        &x.rat * &y.irr + &x.irr * &y.rat,
    )
}

fn div_parts(x: &QuadraticNumber, y: &QuadraticNumber) -> QuadraticNumber {
    mul_parts(x, &y.inv().expect("division by zero in Q(sqrt2)"))
}

macro_rules! quad_binop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl $tr for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: QuadraticNumber) -> QuadraticNumber {
                $f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: &'a QuadraticNumber) -> QuadraticNumber {
                $f(&self, rhs)
            }
        }
        impl<'a, 'b> $tr<&'b QuadraticNumber> for &'a QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: &'b QuadraticNumber) -> QuadraticNumber {
                $f(self, rhs)
            }
        }
    };
}

quad_binop!(Add, add, add_parts);
quad_binop!(Sub, sub, sub_parts);
quad_binop!(Mul, mul, mul_parts);
quad_binop!(Div, div, div_parts);

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber::new(-self.rat, -self.irr)
    }
}

impl Field for QuadraticNumber {
    fn zero() -> Self {
        QuadraticNumber::default()
    }

    fn one() -> Self {
        QuadraticNumber::new(Rational::one(), Rational::zero())
    }

    fn from_rational(r: &Rational) -> Self {
        QuadraticNumber::embed(r)
    }

    fn signum(&self) -> i8 {
        self.sign()
    }

    /// `1 / (a + b sqrt2) = (a - b sqrt2) / (a^2 - 2 b^2)`.
    fn inv(&self) -> Result<Self, ArithError> {
        let norm = self.norm();
        if norm.is_zero() {
            // norm vanishes only at zero
            return Err(ArithError::DivisionByZero);
        }
        let conj = self.conjugate();
        Ok(QuadraticNumber::new(&conj.rat / &norm, &conj.irr / &norm))
    }

    fn to_rational(&self) -> Option<Rational> {
        self.irr.is_zero().then(|| self.rat.clone())
    }

    fn to_f64(&self) -> f64 {
        self.rat.to_f64() + self.irr.to_f64() * std::f64::consts::SQRT_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadraticNumber {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_product() {
        assert_eq!(q("2-1*sqrt2") * q("2+1*sqrt2"), q("2"));
    }

    #[test]
    fn rationalize_denominator() {
        assert_eq!(q("1") / q("sqrt2"), q("1/2*sqrt2"));
    }

    #[test]
    fn square_of_sqrt2_minus_one() {
        assert_eq!(q("-1+sqrt2") * q("-1+sqrt2"), q("3-2*sqrt2"));
    }

    #[test]
    fn signs() {
        assert_eq!(q("2-sqrt2").sign(), 1);
        assert_eq!(q("1-sqrt2").sign(), -1);
        assert_eq!(q("0").sign(), 0);
        assert_eq!(q("-3/2+sqrt2").sign(), -1);
        assert_eq!(q("-1/2*sqrt2").sign(), -1);
    }

    #[test]
    fn embedding() {
        let e = QuadraticNumber::embed(&Rational::new(3, 4));
        assert_eq!(e.to_string(), "3/4");
        assert_eq!(QuadraticNumber::embed(&Rational::zero()), QuadraticNumber::zero());
        assert_eq!(QuadraticNumber::embed(&Rational::one()), QuadraticNumber::one());
    }

    #[test]
    fn render_round_trip() {
        for s in ["2-sqrt2", "1/2*sqrt2", "-3/4", "5/7+1/14*sqrt2", "-1/2-3*sqrt2", "0"] {
            assert_eq!(q(s).to_string(), s);
        }
        assert_eq!(q("sqrt2").to_string(), "sqrt2");
        assert_eq!(q("-sqrt2").to_string(), "-sqrt2");
        assert_eq!(q("1-1*sqrt2").to_string(), "1-sqrt2");
    }

    #[test]
    fn zero_division() {
        assert_eq!(q("0").inv(), Err(ArithError::DivisionByZero));
        assert!(q("1").checked_div(&q("0")).is_err());
    }

    #[test]
    fn ordering_uses_exact_sign() {
        // 2 - sqrt2 ~ 0.5858 sits between 29/50 and 59/100
        let x = q("2-sqrt2");
        assert!(q("29/50") < x && x < q("59/100"));
    }
}
