use std::fmt;

use crate::exact::{Field, Rational};

/// The linear fractional map `x -> (a x + b) / (c x + d)` stored as the
/// matrix `((a, b), (c, d))`. Composition is matrix multiplication.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mobius {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Mobius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Mobius { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mobius::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mobius::from_ints(1, 0, 0, 1)
    }

    /// The constant map `x -> value`.
    pub fn constant(value: Rational) -> Self {
        Mobius::new(Rational::zero(), value, Rational::zero(), Rational::one())
    }

    /// `x -> x + k`.
    pub fn translation(k: Rational) -> Self {
        Mobius::new(Rational::one(), k, Rational::zero(), Rational::one())
    }

    /// `x -> 1 - x`.
    pub fn reflection() -> Self {
        Mobius::from_ints(-1, 1, 0, 1)
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_singular(&self) -> bool {
        self.det().is_zero()
    }

    /// Evaluates at `x` in any field containing Q; `None` on a zero
    /// denominator.
    pub fn apply<F: Field>(&self, x: &F) -> Option<F> {
        let num = F::from_rational(&self.a) * x + &F::from_rational(&self.b);
        let den = F::from_rational(&self.c) * x + &F::from_rational(&self.d);
        num.checked_div(&den).ok()
    }

    pub fn denominator_sign(&self, x: &Rational) -> i8 {
        (&self.c * x + &self.d).signum()
    }

    /// Matrix product `self * other`, i.e. the map `self after other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius::new(
            &self.a * &other.a + &self.b * &other.c,
            &self.a * &other.b + &self.b * &other.d,
            &self.c * &other.a + &self.d * &other.c,
            &self.c * &other.b + &self.d * &other.d,
        )
    }

    /// Adjugate, which is the inverse map when the matrix is nonsingular.
    pub fn inverse(&self) -> Mobius {
        Mobius::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }

    /// Equal up to a nonzero scalar factor.
    pub fn proportional(&self, other: &Mobius) -> bool {
        let x = [&self.a, &self.b, &self.c, &self.d];
        let y = [&other.a, &other.b, &other.c, &other.d];
        let nonzero = |v: &[&Rational; 4]| v.iter().any(|e| !e.is_zero());
        if !nonzero(&x) || !nonzero(&y) {
            return false;
        }
        (0..4).all(|i| (i + 1..4).all(|j| x[i] * y[j] == x[j] * y[i]))
    }

    /// Representative scaled so its first nonzero coefficient is 1.
    pub fn normalized(&self) -> Mobius {
        let pivot = [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .find(|e| !e.is_zero())
            .cloned()
            .unwrap_or_else(Rational::one);
        Mobius::new(
            &self.a / &pivot,
            &self.b / &pivot,
            &self.c / &pivot,
            &self.d / &pivot,
        )
    }

    /// `-c x^2 + (a - d) x + b`, the numerator of `self(x) - x` over
    /// `c x + d`.
    pub fn fixed_point_quadratic(&self) -> [Rational; 3] {
        [-self.c.clone(), &self.a - &self.d, self.b.clone()]
    }
}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}, {}), ({}, {}))", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn composition_matches_evaluation() {
        let f1 = Mobius::from_ints(2, 1, 1, 3);
        let f2 = Mobius::from_ints(-1, 4, 2, 5);
        let x = r("3/7");
        let inner = f1.apply(&x).unwrap();
        assert_eq!(f2.compose(&f1).apply(&x).unwrap(), f2.apply(&inner).unwrap());
    }

    #[test]
    fn inverse_undoes() {
        let f = Mobius::from_ints(52, -30, 15, -8);
        let x = r("3/5");
        let y = f.apply(&x).unwrap();
        assert_eq!(y, r("6/5"));
        assert_eq!(f.inverse().apply(&y).unwrap(), x);
    }

    #[test]
    fn proportionality() {
        let f = Mobius::from_ints(52, -30, 15, -8);
        let g = Mobius::new(r("26"), r("-15"), r("15/2"), r("-4"));
        assert!(f.proportional(&g));
        assert!(!f.proportional(&Mobius::identity()));
        assert_eq!(f.normalized(), g.normalized());
    }

    #[test]
    fn zero_denominator() {
        assert!(Mobius::from_ints(1, 0, 1, -1).apply(&Rational::one()).is_none());
    }
}
