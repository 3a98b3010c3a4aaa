//! Exact sums of square roots with Gaussian-rational coefficients.
//!
//! A [`RootSum`] is Σ cᵢ·√rᵢ with cᵢ ∈ ℚ(i) and rᵢ > 0 rational, kept in a
//! normal form where no two radicands differ by a rational square factor.
//! Square roots of such radicands are linearly independent over ℚ(i), so a
//! normalized sum is zero iff it has no terms. Magnitudes are reported
//! through outward-rounded rational enclosures.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, rational_sqrt, to_f64, Rational};

pub type Gaussian = Complex<Rational>;

pub fn gaussian(re: Rational, im: Rational) -> Gaussian {
    Complex::new(re, im)
}

pub fn real(re: Rational) -> Gaussian {
    Complex::new(re, Rational::zero())
}

pub const DEFAULT_PRECISION_BITS: u32 = 64;

/// Enclosure precision in bits: `FRAMESMITH_PRECISION` when set to a
/// positive integer, 64 otherwise.
pub fn precision_bits() -> u32 {
    std::env::var("FRAMESMITH_PRECISION")
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|b| (1..=4096).contains(b))
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootSum {
    terms: Vec<(Gaussian, Rational)>,
}

impl RootSum {
    pub fn zero() -> Self {
        RootSum { terms: Vec::new() }
    }

    pub fn rational(c: Rational) -> Self {
        Self::gaussian(real(c))
    }

    pub fn gaussian(c: Gaussian) -> Self {
        let mut s = Self::zero();
        s.add_term(c, Rational::one());
        s
    }

    /// √r for r ≥ 0.
    pub fn sqrt(r: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(real(Rational::one()), r);
        s
    }

    pub fn terms(&self) -> &[(Gaussian, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds c·√r in place, keeping the normal form.
    pub fn add_term(&mut self, c: Gaussian, r: Rational) {
        assert!(!r.is_negative(), "negative radicand");
        if c.is_zero() || r.is_zero() {
            return;
        }
        let (c, r) = match rational_sqrt(&r) {
            Some(root) => (c * real(root), Rational::one()),
            None => (c, r),
        };
        for i in 0..self.terms.len() {
            let ratio = &r / &self.terms[i].1;
            if let Some(t) = rational_sqrt(&ratio) {
                let merged = &self.terms[i].0 + c * real(t);
                if merged.is_zero() {
                    self.terms.swap_remove(i);
                } else {
                    self.terms[i].0 = merged;
                }
                return;
            }
        }
        self.terms.push((c, r));
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, r) in &other.terms {
            out.add_term(c.clone(), r.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        RootSum {
            terms: self.terms.iter().map(|(c, r)| (-c, r.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Gaussian) -> Self {
        let mut out = Self::zero();
        for (c, r) in &self.terms {
            out.add_term(c * k, r.clone());
        }
        out
    }

    pub fn conj(&self) -> Self {
        RootSum {
            terms: self.terms.iter().map(|(c, r)| (c.conj(), r.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (c1, r1) in &self.terms {
            for (c2, r2) in &other.terms {
                out.add_term(c1 * c2, r1 * r2);
            }
        }
        out
    }

    /// |x|², which is real.
    pub fn norm_sqr(&self) -> Self {
        self.mul(&self.conj())
    }

    /// The exact value when the sum is a Gaussian rational.
    pub fn as_gaussian(&self) -> Option<Gaussian> {
        match self.terms.as_slice() {
            [] => Some(Gaussian::zero()),
            [(c, r)] if r.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_gaussian().filter(|g| g.im.is_zero()).map(|g| g.re)
    }

    pub fn enclosure(&self, bits: u32) -> ComplexEnclosure {
        let mut re = Enclosure::point(Rational::zero());
        let mut im = Enclosure::point(Rational::zero());
        for (c, r) in &self.terms {
            let root = Enclosure::sqrt(r, bits);
            re = re.add(&root.scale(&c.re));
            im = im.add(&root.scale(&c.im));
        }
        ComplexEnclosure { re, im }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let e = self.enclosure(DEFAULT_PRECISION_BITS);
        (e.re.midpoint_f64(), e.im.midpoint_f64())
    }

    /// Exact text when rational, otherwise a decimal approximation.
    pub fn describe(&self) -> String {
        match self.as_rational() {
            Some(q) => format_rational(&q),
            None => {
                let (re, im) = self.to_f64();
                if im == 0.0 {
                    format!("~{re:.17e}")
                } else {
                    format!("~{re:.17e}{im:+.17e}i")
                }
            }
        }
    }
}

impl fmt::Display for RootSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Closed rational interval [lo, hi].
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn point(x: Rational) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    /// Dyadic bounds on √r with `bits` fractional bits.
    pub fn sqrt(r: &Rational, bits: u32) -> Self {
        if let Some(root) = rational_sqrt(r) {
            return Self::point(root);
        }
        let scale = BigInt::one() << (2 * bits as usize);
        let scaled_num = r.numer() * &scale;
        let (floor, rem) = scaled_num.div_rem(r.denom());
        let ceil = if rem.is_zero() { floor.clone() } else { &floor + 1 };
        let lo_root = floor.sqrt();
        let mut hi_root = ceil.sqrt();
        if &hi_root * &hi_root < ceil {
            hi_root += 1;
        }
        let unit = BigInt::one() << bits as usize;
        Enclosure {
            lo: Rational::new(lo_root, unit.clone()),
            hi: Rational::new(hi_root, unit),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Enclosure {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            Enclosure { lo: b, hi: a }
        } else {
            Enclosure { lo: a, hi: b }
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn magnitude_bound(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn midpoint_f64(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / Rational::from_integer(2.into())))
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexEnclosure {
    pub re: Enclosure,
    pub im: Enclosure,
}

impl ComplexEnclosure {
    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Lower bound on the modulus, rounded down in floating point.
    pub fn modulus_lower_bound(&self) -> f64 {
        let dist = |e: &Enclosure| {
            if e.contains_zero() {
                0.0
            } else {
                to_f64(&e.lo.abs().min(e.hi.abs()))
            }
        };
        dist(&self.re).max(dist(&self.im)) * (1.0 - 4.0 * f64::EPSILON)
    }

    /// Upper bound on the modulus, rounded up in floating point.
    pub fn modulus_bound(&self) -> f64 {
        let re = to_f64(&self.re.magnitude_bound());
        let im = to_f64(&self.im.magnitude_bound());
        let m = re.hypot(im);
        if m == 0.0 {
            0.0
        } else {
            m * (1.0 + 4.0 * f64::EPSILON)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn similar_radicands_merge() {
        // √8 − 2√2 = 0
        let mut s = RootSum::sqrt(rat(8, 1));
        s.add_term(real(rat(-2, 1)), rat(2, 1));
        assert!(s.is_zero());
        // √(1/2) = √2 / 2
        let a = RootSum::sqrt(rat(1, 2));
        let b = RootSum::sqrt(rat(2, 1)).scale(&real(rat(1, 2)));
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn products_reduce_to_rationals() {
        let s = RootSum::sqrt(rat(1, 2)).mul(&RootSum::sqrt(rat(1, 2)));
        assert_eq!(s.as_rational(), Some(rat(1, 2)));
        let z = RootSum::sqrt(rat(2, 1)).add(&RootSum::gaussian(gaussian(rat(0, 1), rat(1, 1))));
        assert_eq!(z.norm_sqr().as_rational(), Some(rat(3, 1)));
    }

    #[test]
    fn independent_roots_do_not_cancel() {
        let s = RootSum::sqrt(rat(2, 1)).sub(&RootSum::sqrt(rat(3, 1)));
        assert!(!s.is_zero());
        let e = s.enclosure(64);
        assert!(!e.contains_zero());
        assert!((e.re.midpoint_f64() - (2f64.sqrt() - 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn sqrt_enclosure_brackets() {
        for (n, d) in [(2, 1), (1, 3), (10201, 7), (5, 1_000_003)] {
            let r = rat(n, d);
            let e = Enclosure::sqrt(&r, 64);
            assert!(&e.lo * &e.lo <= r && r <= &e.hi * &e.hi);
            assert!(e.width() <= Rational::new(1.into(), BigInt::one() << 63));
        }
    }
}
