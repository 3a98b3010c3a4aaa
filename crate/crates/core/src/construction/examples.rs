//! Built-in spectral functions.

use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::arith::{int, parse_rational, rat, Affine, IntervalSet, PiRational, Piece, PiecewiseLinear, Rational};
use crate::construction::{waveletset_sigma, SpectralSpec, DEFAULT_FIXPOINT_BUDGET};
use crate::error::{Error, Result};

/// 1 + ξ/a on [−a, 0), 1 − ξ/b on [0, b), with a, b > 0 in π units.
pub fn example_pwl(a: &Rational, b: &Rational) -> PiecewiseLinear {
    assert!(a.is_positive() && b.is_positive());
    let one = int(1);
    PiecewiseLinear::new(vec![
        Piece::new(
            PiRational::from_rational(-a),
            PiRational::zero(),
            Affine::new(a.recip(), one.clone()),
        ),
        Piece::new(
            PiRational::zero(),
            PiRational::from_rational(b.clone()),
            Affine::new(-b.recip(), one),
        ),
    ])
    .expect("pieces are ordered and disjoint")
}

/// χ_[−1, 1).
pub fn shannon_sigma() -> PiecewiseLinear {
    PiecewiseLinear::indicator(&IntervalSet::interval((-1).into(), 1.into()), int(1))
}

/// 1 − |ξ|/2 on [−2, 2).
pub fn tent_sigma() -> PiecewiseLinear {
    example_pwl(&int(2), &int(2))
}

/// The Journé wavelet set for dilation 2.
pub fn journe_set() -> IntervalSet {
    IntervalSet::from_pieces([
        (PiRational::new(-32, 7), PiRational::integer(-4)),
        (PiRational::integer(-1), PiRational::new(-4, 7)),
        (PiRational::new(4, 7), PiRational::integer(1)),
        (PiRational::integer(4), PiRational::new(32, 7)),
    ])
}

/// [−2, −1) ∪ [1, 2).
pub fn shannon_set() -> IntervalSet {
    IntervalSet::interval((-2).into(), (-1).into()).union(&IntervalSet::interval(1.into(), 2.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Example {
    Pwl { a: Rational, b: Rational },
    Shannon,
    Journe,
    Tent,
}

impl Example {
    pub fn sigma(&self, dilation: i64) -> Result<PiecewiseLinear> {
        Ok(match self {
            Example::Pwl { a, b } => example_pwl(a, b),
            Example::Shannon => shannon_sigma(),
            Example::Tent => tent_sigma(),
            Example::Journe => waveletset_sigma(&journe_set(), dilation, DEFAULT_FIXPOINT_BUDGET)?.sigma(),
        })
    }

    pub fn spec(&self, dilation: i64) -> Result<SpectralSpec> {
        SpectralSpec::new(self.sigma(dilation)?, dilation)
    }
}

impl FromStr for Example {
    type Err = Error;

    /// `shannon`, `journe`, `tent` or `pwl:a=1/2,b=1/2`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shannon" => return Ok(Example::Shannon),
            "journe" => return Ok(Example::Journe),
            "tent" => return Ok(Example::Tent),
            _ => {}
        }
        let params = s
            .strip_prefix("pwl:")
            .ok_or_else(|| Error::parse(format!("example {s:?}"), "unknown example"))?;
        let (mut a, mut b) = (None, None);
        for kv in params.split(',') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("example {s:?}"), format!("expected key=value, got {kv:?}")))?;
            let v = parse_rational(v)?;
            if !v.is_positive() {
                return Err(Error::parse(format!("example {s:?}"), format!("{k} must be positive")));
            }
            match k.trim() {
                "a" => a = Some(v),
                "b" => b = Some(v),
                other => return Err(Error::parse(format!("example {s:?}"), format!("unknown key {other:?}"))),
            }
        }
        match (a, b) {
            (Some(a), Some(b)) => Ok(Example::Pwl { a, b }),
            _ => Err(Error::parse(format!("example {s:?}"), "both a and b are required")),
        }
    }
}

fn small_rational<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational) -> Rational {
    let den = rng.random_range(1..=8i64);
    let span = (hi - lo) * int(den);
    let steps = span.floor().to_integer();
    let steps: i64 = num_traits::ToPrimitive::to_i64(&steps).unwrap_or(0).max(0);
    lo + rat(rng.random_range(0..=steps), den)
}

/// One side of a random radially nonincreasing profile starting at 1.
/// Returns (x_i, v_start, v_end) segments on [x_{i−1}, x_i).
fn random_side<R: Rng>(rng: &mut R) -> Vec<(Rational, Rational, Rational)> {
    let n = rng.random_range(1..=3);
    let mut xs: Vec<Rational> = Vec::with_capacity(n);
    let mut x = Rational::zero();
    for _ in 0..n {
        x = small_rational(rng, &(&x + rat(1, 8)), &(&x + int(2)));
        xs.push(x.clone());
    }
    let mut v = int(1);
    let mut segs = Vec::with_capacity(n);
    for (i, x) in xs.into_iter().enumerate() {
        let start = if i == 0 || rng.random_bool(0.5) {
            v.clone()
        } else {
            small_rational(rng, &Rational::zero(), &v)
        };
        let end = if rng.random_bool(0.25) {
            start.clone()
        } else {
            small_rational(rng, &Rational::zero(), &start)
        };
        v = end.clone();
        segs.push((x, start, end));
    }
    segs
}

/// A random admissible σ: radially nonincreasing with σ(0±) = 1, symmetric
/// when a < 0 so that σ(aξ) ≤ σ(ξ) still holds across the sign flip.
pub fn random_admissible_sigma<R: Rng>(rng: &mut R, a: i64) -> PiecewiseLinear {
    let right = random_side(rng);
    let left = if a < 0 { right.clone() } else { random_side(rng) };
    let mut pieces = Vec::new();
    let mut prev = Rational::zero();
    for (x, vs, ve) in &right {
        let slope = (ve - vs) / (x - &prev);
        let intercept = vs - &slope * &prev;
        pieces.push(Piece::new(
            PiRational::from_rational(prev.clone()),
            PiRational::from_rational(x.clone()),
            Affine::new(slope, intercept),
        ));
        prev = x.clone();
    }
    let mut prev = Rational::zero();
    for (x, vs, ve) in &left {
        // mirrored: value vs at −prev, ve at −x
        let slope = (vs - ve) / (x - &prev);
        let intercept = vs + &slope * &prev;
        pieces.push(Piece::new(
            PiRational::from_rational(-x.clone()),
            PiRational::from_rational(-prev.clone()),
            Affine::new(slope, intercept),
        ));
        prev = x.clone();
    }
    PiecewiseLinear::new(pieces).expect("random pieces are disjoint")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::admissibility_check;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_example_names() {
        assert_eq!("shannon".parse::<Example>().unwrap(), Example::Shannon);
        assert_eq!(
            "pwl:a=1/2,b=3".parse::<Example>().unwrap(),
            Example::Pwl {
                a: rat(1, 2),
                b: int(3)
            }
        );
        assert!("pwl:a=1/2".parse::<Example>().is_err());
        assert!("pwl:a=-1,b=1".parse::<Example>().is_err());
        assert!("haar".parse::<Example>().is_err());
    }

    #[test]
    fn random_sigmas_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
        for i in 0..200 {
            let a = [2, 3, -2, 4, -3][i % 5];
            let s = random_admissible_sigma(&mut rng, a);
            let spec = SpectralSpec::new(s.clone(), a).unwrap();
            let r = admissibility_check(&spec);
            assert!(r.passed(), "{s:?} a={a}: {r:?}");
            assert!(s.supremum() <= int(1));
        }
    }
}
