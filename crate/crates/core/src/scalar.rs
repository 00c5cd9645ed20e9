//! Exact Gaussian-rational scalars.
//!
//! A [`Scalar`] is `re + im*i` with both parts arbitrary-precision rationals.
//! This is the coefficient field for every jet in the crate. All operations
//! are exact; nothing here ever rounds.
//!
//! Invariants (maintained by `num-rational`):
//! - fractions are always reduced, denominators positive and nonzero
//! - the canonical text form is `"p"` or `"p/q"` with `q > 1`, `gcd(p,q)=1`

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ScalarError;

/// Parses the canonical rational text forms `"p"` and `"p/q"`.
///
/// Inputs are normalized (reduced, positive denominator) on construction;
/// a zero denominator is rejected rather than panicking.
pub fn parse_rational(text: &str, part: &'static str) -> Result<BigRational, ScalarError> {
    let malformed = || ScalarError::MalformedRational {
        part,
        text: text.to_owned(),
    };
    let trimmed = text.trim();
    let (numer_text, denom_text) = match trimmed.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (trimmed, None),
    };
    let numer = BigInt::from_str(numer_text.trim()).map_err(|_| malformed())?;
    let denom = match denom_text {
        Some(d) => BigInt::from_str(d.trim()).map_err(|_| malformed())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(malformed());
    }
    Ok(BigRational::new(numer, denom))
}

/// An exact Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    /// Purely real scalar.
    pub fn real(re: BigRational) -> Self {
        Scalar {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::real(BigRational::one())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::real(BigRational::from_integer(n))
    }

    /// `p/q` as a real scalar.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        Scalar::real(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Parses the canonical `"p"`/`"p/q"` text forms of both parts.
    pub fn parse(re: &str, im: &str) -> Result<Self, ScalarError> {
        Ok(Scalar {
            re: parse_rational(re, "re")?,
            im: parse_rational(im, "im")?,
        })
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Exact inverse; `None` for zero.
    pub fn checked_inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        // 1/(a+bi) = (a - bi)/(a^2 + b^2)
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Scalar {
            re: &self.re / &norm,
            im: -(&self.im / &norm),
        })
    }

    /// An exact rational bound on the modulus: `|re| + |im|`.
    ///
    /// The true modulus is generally irrational; this majorant keeps
    /// norm-style estimates inside the rational field.
    pub fn abs_bound(&self) -> BigRational {
        self.re.abs() + self.im.abs()
    }

    pub fn pow(&self, exp: usize) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

/// `n!` as an exact big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        (&self).mul(&rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

/// Panics on division by zero, like the underlying rationals.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs
            .checked_inv()
            .expect("Scalar division by zero");
        self.mul(&inv)
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        (&self).div(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, q_: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q_))
    }

    #[test]
    fn inverse_of_i_is_minus_i() {
        let inv = Scalar::i().checked_inv().unwrap();
        assert_eq!(inv, Scalar::new(q(0, 1), q(-1, 1)));
    }

    #[test]
    fn complex_division_is_exact() {
        // 2/i = -2i
        let b = &Scalar::from_integer(2) / &Scalar::i();
        assert_eq!(b, Scalar::new(q(0, 1), q(-2, 1)));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(Scalar::zero().checked_inv().is_none());
    }

    #[test]
    fn parse_normalizes_and_rejects_zero_denominator() {
        let s = Scalar::parse("2/4", "-3/-6").unwrap();
        assert_eq!(s, Scalar::new(q(1, 2), q(1, 2)));
        assert!(Scalar::parse("1/0", "0").is_err());
        assert!(Scalar::parse("x", "0").is_err());
    }

    #[test]
    fn display_matches_canonical_form() {
        assert_eq!(Scalar::from_ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(Scalar::from_integer(5).to_string(), "5");
        assert_eq!(Scalar::i().to_string(), "1i");
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(10), BigInt::from(3_628_800));
    }

    #[test]
    fn abs_bound_adds_part_magnitudes() {
        let s = Scalar::new(q(-1, 2), q(1, 3));
        assert_eq!(s.abs_bound(), q(5, 6));
    }
}
