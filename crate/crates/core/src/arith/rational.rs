//! Rational scalars and frequencies measured in units of π.
//!
//! Every frequency ξ handled by the crate is stored as the exact rational
//! `q` with ξ = qπ. The 2π-lattice is then the even integers and the
//! dual dilation acts by integer multiplication.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::parse(format!("{s:?}"), "numerator is not an integer"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::parse(format!("{s:?}"), "denominator is not an integer"))?;
    if den.is_zero() {
        return Err(Error::parse(format!("{s:?}"), "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"num/den"` text, denominator always present.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact square root of a nonnegative rational, when it has one.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer().to_i64().expect("integer part fits in i64")
}

pub fn ceil_i64(r: &Rational) -> i64 {
    r.ceil().to_integer().to_i64().expect("integer part fits in i64")
}

/// A frequency ξ = qπ, stored as the reduced rational q.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PiRational(Rational);

impl PiRational {
    pub fn new(num: i64, den: i64) -> Self {
        PiRational(rat(num, den))
    }

    pub fn integer(n: i64) -> Self {
        PiRational(int(n))
    }

    pub fn zero() -> Self {
        PiRational(Rational::zero())
    }

    pub fn from_rational(q: Rational) -> Self {
        PiRational(q)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        PiRational(self.0.abs())
    }

    /// ξ ↦ rξ.
    pub fn scale(&self, r: &Rational) -> Self {
        PiRational(&self.0 * r)
    }

    /// ξ ↦ a^j ξ for an integer dilation and any integer exponent.
    pub fn dilate_pow(&self, a: i64, j: i64) -> Self {
        self.scale(&dilation_power(a, j))
    }

    /// ξ ↦ ξ + 2kπ.
    pub fn shift_periods(&self, k: i64) -> Self {
        PiRational(&self.0 + int(2 * k))
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        PiRational((&self.0 + &other.0) / int(2))
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0)
    }
}

/// a^j as an exact rational (negative j allowed).
pub fn dilation_power(a: i64, j: i64) -> Rational {
    let base = int(a);
    if j >= 0 {
        num_traits::pow(base, j as usize)
    } else {
        num_traits::pow(base, (-j) as usize).recip()
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl fmt::Debug for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}π", format_rational(&self.0))
    }
}

impl FromStr for PiRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(PiRational)
    }
}

impl From<i64> for PiRational {
    fn from(n: i64) -> Self {
        PiRational::integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&PiRational> for &PiRational {
            type Output = PiRational;
            fn $method(self, rhs: &PiRational) -> PiRational {
                PiRational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<PiRational> for PiRational {
            type Output = PiRational;
            fn $method(self, rhs: PiRational) -> PiRational {
                PiRational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&PiRational> for PiRational {
            type Output = PiRational;
            fn $method(self, rhs: &PiRational) -> PiRational {
                PiRational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);

impl Neg for PiRational {
    type Output = PiRational;
    fn neg(self) -> PiRational {
        PiRational(-self.0)
    }
}

impl Neg for &PiRational {
    type Output = PiRational;
    fn neg(self) -> PiRational {
        PiRational(-&self.0)
    }
}

impl Serialize for PiRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for PiRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for plain rationals encoded as `"num/den"` strings.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_are_canonical() {
        assert_eq!(format_rational(&parse_rational("6/-4").unwrap()), "-3/2");
        assert_eq!(format_rational(&parse_rational(" 7 ").unwrap()), "7/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn period_shift_is_even_integer() {
        let xi = PiRational::new(1, 2);
        assert_eq!(xi.shift_periods(-1), PiRational::new(-3, 2));
        assert_eq!(xi.dilate_pow(2, 3), PiRational::integer(4));
        assert_eq!(xi.dilate_pow(-3, -1), PiRational::new(-1, 6));
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(1, 2)), None);
        assert_eq!(rational_sqrt(&rat(-1, 1)), None);
    }
}
