//! Finite unions of half-open rational intervals `[l, r)`.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{int, PiRational, Rational};

/// Canonical finite union of disjoint half-open intervals, sorted ascending,
/// with touching pieces merged. Two sets are equal iff their canonical forms are.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntervalSet {
    pieces: Vec<(PiRational, PiRational)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { pieces: Vec::new() }
    }

    pub fn interval(l: PiRational, r: PiRational) -> Self {
        Self::from_pieces([(l, r)])
    }

    /// Builds the canonical form of an arbitrary list of pieces; empty and
    /// reversed pieces are dropped, overlaps and adjacencies merged.
    pub fn from_pieces<I>(pieces: I) -> Self
    where
        I: IntoIterator<Item = (PiRational, PiRational)>,
    {
        let mut raw: Vec<_> = pieces.into_iter().filter(|(l, r)| l < r).collect();
        raw.sort();
        let mut out: Vec<(PiRational, PiRational)> = Vec::with_capacity(raw.len());
        for (l, r) in raw {
            match out.last_mut() {
                Some((_, last_r)) if l <= *last_r => {
                    if r > *last_r {
                        *last_r = r;
                    }
                }
                _ => out.push((l, r)),
            }
        }
        IntervalSet { pieces: out }
    }

    pub fn pieces(&self) -> &[(PiRational, PiRational)] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.pieces
            .iter()
            .fold(Rational::zero(), |acc, (l, r)| acc + (r.value() - l.value()))
    }

    pub fn contains(&self, xi: &PiRational) -> bool {
        self.piece_index(xi).is_some()
    }

    /// Index of the piece containing `xi`.
    pub fn piece_index(&self, xi: &PiRational) -> Option<usize> {
        self.pieces
            .binary_search_by(|(l, r)| {
                if xi < l {
                    Ordering::Greater
                } else if xi >= r {
                    Ordering::Less
                } else {
                    Ordering::Equal
                }
            })
            .ok()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_pieces(self.pieces.iter().chain(other.pieces.iter()).cloned())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    /// Pointwise boolean combination, evaluated on the common refinement.
    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let mut cuts: Vec<&PiRational> = self
            .pieces
            .iter()
            .chain(other.pieces.iter())
            .flat_map(|(l, r)| [l, r])
            .collect();
        cuts.sort();
        cuts.dedup();
        let mut out = Vec::new();
        for w in cuts.windows(2) {
            // membership is constant on [w0, w1), so the left endpoint decides
            if op(self.contains(w[0]), other.contains(w[0])) {
                out.push((w[0].clone(), w[1].clone()));
            }
        }
        Self::from_pieces(out)
    }

    /// E + 2kπ.
    pub fn translate(&self, k: i64) -> Self {
        self.shift(&PiRational::integer(2 * k))
    }

    pub fn shift(&self, by: &PiRational) -> Self {
        IntervalSet {
            pieces: self.pieces.iter().map(|(l, r)| (l + by, r + by)).collect(),
        }
    }

    /// a·E for an integer dilation.
    pub fn dilate(&self, a: i64) -> Self {
        self.scale(&int(a))
    }

    /// r·E. A negative factor maps `[l, r)` onto `(r·h, r·l]`, stored as the
    /// half-open `[r·h, r·l)`; the two differ by a null set.
    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::empty();
        }
        let mapped = self.pieces.iter().map(|(l, r)| {
            let (a, b) = (l.scale(factor), r.scale(factor));
            if factor.is_negative() {
                (b, a)
            } else {
                (a, b)
            }
        });
        Self::from_pieces(mapped)
    }

    /// Smallest `[lo, hi)` containing the set.
    pub fn hull(&self) -> Option<(PiRational, PiRational)> {
        Some((self.pieces.first()?.0.clone(), self.pieces.last()?.1.clone()))
    }

    /// sup |ξ| over the set (0 for the empty set).
    pub fn radius(&self) -> Rational {
        match self.hull() {
            Some((lo, hi)) => lo.value().abs().max(hi.value().abs()),
            None => Rational::zero(),
        }
    }

    /// inf |ξ| over the set; `None` for the empty set.
    pub fn distance_from_zero(&self) -> Option<Rational> {
        self.pieces
            .iter()
            .map(|(l, r)| {
                if l.is_positive() {
                    l.value().clone()
                } else if r.value() <= &Rational::zero() {
                    r.value().abs()
                } else {
                    Rational::zero()
                }
            })
            .min()
    }

    /// All interval endpoints in ascending order.
    pub fn breakpoints(&self) -> Vec<PiRational> {
        self.pieces.iter().flat_map(|(l, r)| [l.clone(), r.clone()]).collect()
    }

    /// True when the set contains some (−ε, ε), up to the point 0 itself.
    pub fn contains_neighborhood_of_zero(&self) -> bool {
        self.pieces.iter().any(|(l, r)| l.is_negative() && r.is_positive())
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[&PiRational; 2]> = self.pieces.iter().map(|(l, r)| [l, r]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<[PiRational; 2]> = Vec::deserialize(d)?;
        for [l, r] in &pairs {
            if l >= r {
                return Err(serde::de::Error::custom(format!(
                    "interval [{l}, {r}) is empty or reversed"
                )));
            }
        }
        Ok(IntervalSet::from_pieces(pairs.into_iter().map(|[l, r]| (l, r))))
    }
}
