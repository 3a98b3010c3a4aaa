//! Finitely supported sequences in ℓ²(ℤ) with Gaussian-rational entries.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{format_rational, gaussian, parse_rational, real, Gaussian, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sequence {
    entries: BTreeMap<i64, Gaussian>,
}

impl Sequence {
    pub fn zero() -> Self {
        Sequence::default()
    }

    /// δ_k.
    pub fn delta(k: i64) -> Self {
        Sequence::zero().with(k, real(Rational::from_integer(1.into())))
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (i64, Gaussian)>) -> Self {
        let mut s = Sequence::zero();
        for (k, v) in entries {
            s.add_at(k, v);
        }
        s
    }

    pub fn with(mut self, k: i64, v: Gaussian) -> Self {
        self.add_at(k, v);
        self
    }

    fn add_at(&mut self, k: i64, v: Gaussian) {
        let slot = self.entries.entry(k).or_insert_with(Gaussian::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&k);
        }
    }

    pub fn get(&self, k: i64) -> Gaussian {
        self.entries.get(&k).cloned().unwrap_or_else(Gaussian::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Gaussian)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.add_at(k, v.clone());
        }
        out
    }

    /// ⟨f, g⟩ = Σ f_k · conj(g_k).
    pub fn inner(&self, other: &Self) -> Gaussian {
        self.entries
            .iter()
            .filter_map(|(k, v)| other.entries.get(k).map(|w| v * w.conj()))
            .fold(Gaussian::zero(), |acc, x| acc + x)
    }

    pub fn norm_sqr(&self) -> Rational {
        self.inner(self).re
    }
}

fn residue_check(a: i64, d: i64) {
    assert!(a.abs() >= 2, "dilation |a| >= 2");
    assert!((0..a.abs()).contains(&d), "residue d must lie in 0..|a|");
}

/// (D_d α)(d + a·l) = α(l), zero off the coset d + aℤ.
pub fn coset_op(a: i64, d: i64, alpha: &Sequence) -> Sequence {
    residue_check(a, d);
    Sequence::from_entries(alpha.iter().map(|(l, v)| (d + a * l, v.clone())))
}

/// (D_d* β)(l) = β(d + a·l).
pub fn coset_op_adj(a: i64, d: i64, beta: &Sequence) -> Sequence {
    residue_check(a, d);
    Sequence::from_entries(beta.iter().filter_map(|(k, v)| {
        let (l, r) = (k - d).div_rem(&a);
        (r == 0).then(|| (l, v.clone()))
    }))
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(k, v)| {
                let c = if v.im.is_zero() {
                    format_rational(&v.re)
                } else if v.re.is_zero() {
                    format!("{}i", format_rational(&v.im))
                } else {
                    let sign = if v.im < Rational::zero() { "" } else { "+" };
                    format!("{}{sign}{}i", format_rational(&v.re), format_rational(&v.im))
                };
                format!("{c}@{k}")
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Sequence {
    type Err = Error;

    /// Comma-separated `coef@index` terms. A coefficient is a rational, a
    /// rational followed by `i`, or `re+imi`; a bare `i` means the unit.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Sequence::zero();
        if s.trim().is_empty() {
            return Ok(out);
        }
        for term in s.split(',') {
            let loc = || format!("sequence term {term:?}");
            let (c, k) = term
                .trim()
                .split_once('@')
                .ok_or_else(|| Error::parse(loc(), "expected coef@index"))?;
            let k: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::parse(loc(), "index is not an integer"))?;
            out.add_at(
                k,
                parse_gaussian(c.trim()).map_err(|e| Error::parse(loc(), e.to_string()))?,
            );
        }
        Ok(out)
    }
}

fn parse_gaussian(c: &str) -> Result<Gaussian> {
    let zero = Rational::zero();
    if let Some(im) = c.strip_suffix('i') {
        // split "re+im" at a sign that is not the leading one
        let split = im
            .char_indices()
            .skip(1)
            .filter(|(_, ch)| *ch == '+' || *ch == '-')
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) if !im[..i].ends_with('/') => (&im[..i], &im[i..]),
            _ => ("", im),
        };
        let im = match im.trim_start_matches('+') {
            "" => Rational::from_integer(1.into()),
            "-" => Rational::from_integer((-1).into()),
            t => parse_rational(t)?,
        };
        let re = if re.is_empty() { zero } else { parse_rational(re)? };
        Ok(gaussian(re, im))
    } else {
        Ok(real(parse_rational(c)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    #[test]
    fn coset_operators_on_deltas() {
        assert_eq!(coset_op(2, 0, &Sequence::delta(0)), Sequence::delta(0));
        assert_eq!(coset_op(2, 1, &Sequence::delta(0)), Sequence::delta(1));
        assert_eq!(coset_op_adj(2, 0, &Sequence::delta(0)), Sequence::delta(0));
        assert!(coset_op_adj(2, 1, &Sequence::delta(0)).is_zero());
        assert_eq!(coset_op(3, 2, &Sequence::delta(1)), Sequence::delta(5));
        assert_eq!(coset_op(-2, 1, &Sequence::delta(1)), Sequence::delta(-1));
        assert_eq!(coset_op_adj(-2, 1, &Sequence::delta(-1)), Sequence::delta(1));
    }

    #[test]
    fn parses_and_prints() {
        let f: Sequence = "1@0, 1/2@1, i@-2, 1-3/4i@5".parse().unwrap();
        assert_eq!(f.get(1), real(rat(1, 2)));
        assert_eq!(f.get(-2), gaussian(rat(0, 1), rat(1, 1)));
        assert_eq!(f.get(5), gaussian(rat(1, 1), rat(-3, 4)));
        assert_eq!(f.to_string().parse::<Sequence>().unwrap(), f);
        assert!("1@x".parse::<Sequence>().is_err());
        assert!("1".parse::<Sequence>().is_err());
        assert_eq!("1@0,-1@0".parse::<Sequence>().unwrap(), Sequence::zero());
    }

    fn arb_seq() -> impl Strategy<Value = Sequence> {
        prop::collection::vec((-20i64..20, -9i64..9, -9i64..9, 1i64..5), 0..8).prop_map(|v| {
            Sequence::from_entries(
                v.into_iter()
                    .map(|(k, re, im, d)| (k, gaussian(rat(re, d), rat(im, d)))),
            )
        })
    }

    proptest! {
        #[test]
        fn adjoint_pairs_and_resolution_of_identity(
            alpha in arb_seq(), beta in arb_seq(), a in prop::sample::select(vec![2i64, 3, -2, -3, 5])
        ) {
            let mut recon = Sequence::zero();
            for d in 0..a.abs() {
                prop_assert_eq!(
                    coset_op(a, d, &alpha).inner(&beta),
                    alpha.inner(&coset_op_adj(a, d, &beta))
                );
                recon = recon.add(&coset_op(a, d, &coset_op_adj(a, d, &beta)));
            }
            prop_assert_eq!(recon, beta);
        }
    }
}
