//! Laurent polynomials in a single variable with exact rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `Σ c_k t^k` over integer `k`, with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalLaurentPoly {
    coeffs: BTreeMap<i32, BigRational>,
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl RationalLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(power: i32, c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(power, c);
        }
        Self { coeffs }
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, BigRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, power: i32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(power).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&power);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, power: i32) -> BigRational {
        self.coeffs.get(&power).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Nonzero terms in ascending power.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn min_power(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(&k, v)| (k, v * c)))
    }

    /// Multiplies by `t^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, v)| (k + shift, v.clone())).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.coeffs
                .iter()
                .map(|(&k, v)| (k - 1, v * BigRational::from_integer(BigInt::from(k)))),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(BigRational::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Floating-point evaluation; coefficients are converted once per call.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(&k, c)| c.to_f64().unwrap_or(f64::NAN) * t.powi(k))
            .sum()
    }

    /// Coefficients as `f64`, for repeated evaluation in hot loops.
    pub fn to_f64_terms(&self) -> Vec<(i32, f64)> {
        self.coeffs
            .iter()
            .map(|(&k, c)| (k, c.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }
}

impl Add for &RationalLaurentPoly {
    type Output = RationalLaurentPoly;
    fn add(self, rhs: Self) -> RationalLaurentPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &RationalLaurentPoly {
    type Output = RationalLaurentPoly;
    fn sub(self, rhs: Self) -> RationalLaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &RationalLaurentPoly {
    type Output = RationalLaurentPoly;
    fn neg(self) -> RationalLaurentPoly {
        RationalLaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul for &RationalLaurentPoly {
    type Output = RationalLaurentPoly;
    fn mul(self, rhs: Self) -> RationalLaurentPoly {
        let mut out = RationalLaurentPoly::zero();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &rhs.coeffs {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

/// Renders `p` in the variable `var`, e.g. `27/4 + 3/2 s^2`.
pub struct Display<'a> {
    poly: &'a RationalLaurentPoly,
    var: &'a str,
}

impl RationalLaurentPoly {
    pub fn display<'a>(&'a self, var: &'a str) -> Display<'a> {
        Display { poly: self, var }
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.poly.terms().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "{}", self.var)?,
                1 => write!(f, "{mag} {}", self.var)?,
                _ if unit => write!(f, "{}^{k}", self.var)?,
                _ => write!(f, "{mag} {}^{k}", self.var)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let p = RationalLaurentPoly::from_terms([(2, rational(1, 2)), (-1, rational(3, 1))]);
        let q = RationalLaurentPoly::monomial(2, rational(-1, 2));
        let s = &p + &q;
        assert_eq!(s.terms().count(), 1);
        assert_eq!(s.coeff(-1), rational(3, 1));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn product_and_derivative() {
        // (1 + t)(1 - t) = 1 - t^2
        let a = RationalLaurentPoly::from_terms([(0, rational(1, 1)), (1, rational(1, 1))]);
        let b = RationalLaurentPoly::from_terms([(0, rational(1, 1)), (1, rational(-1, 1))]);
        let p = &a * &b;
        assert_eq!(p, RationalLaurentPoly::from_terms([(0, rational(1, 1)), (2, rational(-1, 1))]));
        // d/dt t^-2 = -2 t^-3
        let d = RationalLaurentPoly::monomial(-2, rational(1, 1)).derivative();
        assert_eq!(d, RationalLaurentPoly::monomial(-3, rational(-2, 1)));
        assert!(RationalLaurentPoly::constant(rational(5, 3)).derivative().is_zero());
    }

    #[test]
    fn evaluation_and_display() {
        let p = RationalLaurentPoly::from_terms([(0, rational(27, 4)), (2, rational(3, 2))]);
        assert!((p.eval(0.5) - (6.75 + 0.375)).abs() < 1e-15);
        assert_eq!(p.display("s").to_string(), "27/4 + 3/2 s^2");
        let q = RationalLaurentPoly::from_terms([(-1, rational(-3, 1)), (1, rational(1, 1))]);
        assert_eq!(q.display("t").to_string(), "-3 t^-1 + t");
    }
}
