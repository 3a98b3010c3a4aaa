use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::interval_set::IntervalSet;
use super::pwl::PiecewiseLinear;
use super::rational::{int, to_f64, PiRational, Rational};
use crate::error::{Error, Result};

/// The Fourier-domain profile ξ ↦ √(square(ξ))·χ_domain(ξ).
///
/// Only the square is stored; square roots are never expanded, so every
/// identity between squared moduli stays exact.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct SqrtProfile {
    square: PiecewiseLinear,
    domain: IntervalSet,
}

impl SqrtProfile {
    pub fn new(square: PiecewiseLinear, domain: IntervalSet) -> Result<Self> {
        let square = square.restrict(&domain);
        if let Some(w) = square.negative_witness() {
            return Err(Error::validation(
                "profile square nonnegative",
                format!("square is {} at ξ = {w}π", square.eval(&w)),
            ));
        }
        Ok(SqrtProfile { square, domain })
    }

    /// √f on the support of a nonnegative f.
    pub fn from_square(square: PiecewiseLinear) -> Result<Self> {
        let domain = square.support();
        Self::new(square, domain)
    }

    /// χ_E.
    pub fn indicator(set: &IntervalSet) -> Self {
        SqrtProfile {
            square: PiecewiseLinear::indicator(set, int(1)),
            domain: set.clone(),
        }
    }

    /// |profile|², already restricted to the domain.
    pub fn square(&self) -> &PiecewiseLinear {
        &self.square
    }

    pub fn domain(&self) -> &IntervalSet {
        &self.domain
    }

    pub fn support(&self) -> IntervalSet {
        self.square.support()
    }

    pub fn is_zero(&self) -> bool {
        self.square.is_zero()
    }

    pub fn square_at(&self, xi: &PiRational) -> Rational {
        self.square.eval(xi)
    }

    pub fn value_f64(&self, xi: &PiRational) -> f64 {
        to_f64(&self.square_at(xi)).max(0.0).sqrt()
    }

    /// c·profile for c ≥ 0, carried as c²·square.
    pub fn scaled(&self, c: &Rational) -> Self {
        assert!(!c.is_negative(), "profiles stay nonnegative");
        let c2 = c * c;
        SqrtProfile {
            square: self.square.scale_values(&c2),
            domain: if c.is_zero() {
                IntervalSet::empty()
            } else {
                self.domain.clone()
            },
        }
    }

    /// The profile whose square is c2·square, c2 ≥ 0.
    pub fn scaled_square(&self, c2: &Rational) -> Self {
        assert!(!c2.is_negative(), "profiles stay nonnegative");
        SqrtProfile {
            square: self.square.scale_values(c2),
            domain: if c2.is_zero() {
                IntervalSet::empty()
            } else {
                self.domain.clone()
            },
        }
    }

    /// Fourier profile of the dilate D_a f: |a|^{-1/2}·f̂(ξ/a).
    pub fn dilated(&self, a: i64) -> Self {
        let inv = Rational::new(1.into(), a.into());
        let abs_inv = inv.abs();
        SqrtProfile {
            square: self.square.dilate(&inv).scale_values(&abs_inv),
            domain: self.domain.dilate(a),
        }
    }
}

impl<'de> Deserialize<'de> for SqrtProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            square: PiecewiseLinear,
            domain: IntervalSet,
        }
        let raw = Raw::deserialize(d)?;
        SqrtProfile::new(raw.square, raw.domain).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::pwl::{Affine, Piece};
    use crate::arith::rational::rat;

    #[test]
    fn rejects_negative_square() {
        let f = PiecewiseLinear::new(vec![Piece::new(
            PiRational::integer(-1),
            PiRational::integer(1),
            Affine::new(rat(1, 1), rat(0, 1)),
        )])
        .unwrap();
        assert!(SqrtProfile::from_square(f.clone()).is_err());
        // restricted to where it is nonnegative the profile is fine
        let ok = SqrtProfile::new(f, IntervalSet::interval(0.into(), 1.into())).unwrap();
        assert_eq!(ok.square_at(&PiRational::new(1, 2)), rat(1, 2));
        assert_eq!(ok.square_at(&PiRational::new(-1, 2)), rat(0, 1));
    }

    #[test]
    fn dilation_preserves_energy() {
        let p = SqrtProfile::indicator(&IntervalSet::interval((-1).into(), 1.into()));
        for a in [2, 3, -2] {
            let d = p.dilated(a);
            assert_eq!(d.square().integral(), p.square().integral());
            assert_eq!(d.square_at(&PiRational::new(3, 2)), rat(1, a.abs()));
        }
    }

    #[test]
    fn scaling_squares_the_factor() {
        let p = SqrtProfile::indicator(&IntervalSet::interval(0.into(), 1.into()));
        let s = p.scaled(&rat(101, 100));
        assert_eq!(s.square_at(&PiRational::new(1, 2)), rat(10201, 10000));
    }
}
