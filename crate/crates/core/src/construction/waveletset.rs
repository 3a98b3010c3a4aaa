//! σ = χ_E from a wavelet set, and classification of candidate sets E.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{dilation_power, int, IntervalSet, PiRational, PiecewiseLinear, Rational};
use crate::error::{Error, Result};
use crate::folding::per_multiplicity;

pub const DEFAULT_FIXPOINT_BUDGET: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WaveletSetClosure {
    pub set: IntervalSet,
    pub iterations: usize,
}

impl WaveletSetClosure {
    pub fn sigma(&self) -> PiecewiseLinear {
        PiecewiseLinear::indicator(&self.set, int(1))
    }
}

/// The largest h with (0, h) ⊂ U (`positive`) or (−h, 0) ⊂ U, read off a
/// piece of U that links up with its own image under the contraction
/// ξ ↦ ξ/b. Because U ⊇ b⁻¹U, such a piece forces the whole gap to 0.
fn settled_reach(u: &IntervalSet, b: &Rational, positive: bool) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for (l, r) in u.pieces() {
        let (l, r) = (l.value(), r.value());
        let reach = if l.is_negative() && r.is_positive() {
            Some(if positive { r.clone() } else { -l })
        } else if positive && !l.is_negative() && r.is_positive() {
            (r >= &(b * l)).then(|| r.clone())
        } else if !positive && l.is_negative() && !r.is_positive() {
            (-l >= b * (-r)).then(|| -l)
        } else {
            None
        };
        if let Some(h) = reach {
            if best.as_ref().is_none_or(|cur| &h > cur) {
                best = Some(h);
            }
        }
    }
    best
}

/// U = ∪_{j≥1} a^{−j}E, computed by accumulating U_n = ∪_{j=1..n} a^{−j}E
/// until the part still missing near 0 is provably filled in.
pub fn waveletset_sigma(e: &IntervalSet, a: i64, budget: usize) -> Result<WaveletSetClosure> {
    crate::construction::check_dilation(a)?;
    if e.is_empty() {
        return Ok(WaveletSetClosure {
            set: IntervalSet::empty(),
            iterations: 0,
        });
    }
    let radius = e.radius();
    let b = if a > 0 { int(a) } else { int(a * a) };
    let has_pos = e.pieces().iter().any(|(_, r)| r.is_positive());
    let has_neg = e.pieces().iter().any(|(l, _)| l.is_negative());
    // with a > 0 a side of E that is empty stays empty
    let pos_needed = a < 0 || has_pos;
    let neg_needed = a < 0 || has_neg;

    let mut u = IntervalSet::empty();
    for n in 1..=budget {
        u = u.union(&e.scale(&dilation_power(a, -(n as i64))));
        // every a^{-j}E with j > n lies within this distance of 0
        let tail = &radius * dilation_power(a.abs(), -(n as i64 + 1));
        let pos = settled_reach(&u, &b, true);
        let neg = settled_reach(&u, &b, false);
        let pos_ok = !pos_needed || pos.as_ref().is_some_and(|h| h > &tail);
        let neg_ok = !neg_needed || neg.as_ref().is_some_and(|h| h > &tail);
        if pos_ok && neg_ok {
            let mut set = u;
            if let (true, Some(h)) = (pos_needed, pos) {
                set = set.union(&IntervalSet::interval(PiRational::zero(), PiRational::from_rational(h)));
            }
            if let (true, Some(h)) = (neg_needed, neg) {
                set = set.union(&IntervalSet::interval(
                    PiRational::from_rational(-h),
                    PiRational::zero(),
                ));
            }
            return Ok(WaveletSetClosure { set, iterations: n });
        }
    }
    Err(Error::NonTerminating { budget, partial: u })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum SeedClass {
    NotAdmissible {
        reason: String,
    },
    /// Per(χ_{aE∖E}) ≤ 1: a single NTF wavelet set.
    Ntf,
    /// Per(χ_{aE∖E}) = 1: an orthonormal wavelet set.
    Orthonormal,
    /// Bounded periodization above 1: an NTF multiwavelet with this many sets.
    MultiNtf {
        layers: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedClassification {
    #[serde(flatten)]
    pub class: SeedClass,
    /// aE ∖ E.
    pub difference: IntervalSet,
    pub periodization_bound: usize,
}

/// Classifies σ = χ_E by the admissibility conditions rewritten for sets.
pub fn classify_waveletset_seed(e: &IntervalSet, a: i64) -> SeedClassification {
    let ae = e.dilate(a);
    let difference = ae.difference(e);
    let mult = per_multiplicity(&difference);
    let p = mult.max();
    let not = |reason: String| SeedClassification {
        class: SeedClass::NotAdmissible { reason },
        difference: difference.clone(),
        periodization_bound: p,
    };
    if a.abs() < 2 {
        return not(format!("dilation a = {a} must satisfy |a| >= 2"));
    }
    if e.measure().is_zero() {
        return not("E is null".into());
    }
    let outside = e.difference(&ae);
    if !outside.is_empty() {
        return not(format!("E is not contained in aE; E \\ aE = {outside:?}"));
    }
    if !e.contains_neighborhood_of_zero() {
        return not("E contains no neighborhood of 0, so a^-j xi does not stay in E".into());
    }
    let class = if mult.is_constant(1) {
        SeedClass::Orthonormal
    } else if p <= 1 {
        SeedClass::Ntf
    } else {
        SeedClass::MultiNtf { layers: p }
    };
    SeedClassification {
        class,
        difference,
        periodization_bound: p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::examples::{journe_set, shannon_set};

    fn iv(l: (i64, i64), r: (i64, i64)) -> IntervalSet {
        IntervalSet::interval(PiRational::new(l.0, l.1), PiRational::new(r.0, r.1))
    }

    /// Union of a^{-j}E for j = 1..n, without any closure argument.
    fn truncated_union(e: &IntervalSet, a: i64, n: i64) -> IntervalSet {
        (1..=n).fold(IntervalSet::empty(), |u, j| u.union(&e.scale(&dilation_power(a, -j))))
    }

    #[test]
    fn shannon_closes_to_the_fundamental_domain() {
        let c = waveletset_sigma(&shannon_set(), 2, DEFAULT_FIXPOINT_BUDGET).unwrap();
        assert_eq!(c.set, iv((-1, 1), (1, 1)));
    }

    #[test]
    fn interval_seed_halves() {
        let c = waveletset_sigma(&iv((-1, 1), (1, 1)), 2, DEFAULT_FIXPOINT_BUDGET).unwrap();
        assert_eq!(c.set, iv((-1, 2), (1, 2)));
    }

    #[test]
    fn journe_closure_and_difference() {
        let c = waveletset_sigma(&journe_set(), 2, DEFAULT_FIXPOINT_BUDGET).unwrap();
        let expected = IntervalSet::from_pieces([
            (PiRational::new(-16, 7), PiRational::integer(-2)),
            (PiRational::new(-8, 7), PiRational::integer(-1)),
            (PiRational::new(-4, 7), PiRational::new(4, 7)),
            (PiRational::integer(1), PiRational::new(8, 7)),
            (PiRational::integer(2), PiRational::new(16, 7)),
        ]);
        assert_eq!(c.set, expected);
        assert_eq!(c.set.dilate(2).difference(&c.set), journe_set());
        // agrees with the plain truncated union away from 0
        let eps = iv((-1, 1000), (1, 1000));
        assert_eq!(truncated_union(&journe_set(), 2, 20).union(&eps), c.set.union(&eps));
    }

    #[test]
    fn negative_dilation_closes() {
        let c = waveletset_sigma(&shannon_set(), -2, DEFAULT_FIXPOINT_BUDGET).unwrap();
        assert_eq!(c.set, iv((-1, 1), (1, 1)));
        // [1, 2) alone leaves gaps of ratio 2 under ξ ↦ ξ/4 and never closes
        assert!(waveletset_sigma(&iv((1, 1), (2, 1)), -2, 32).is_err());
        let one_sided = iv((1, 1), (4, 1));
        let c = waveletset_sigma(&one_sided, -2, DEFAULT_FIXPOINT_BUDGET).unwrap();
        let eps = iv((-1, 4096), (1, 4096));
        assert_eq!(truncated_union(&one_sided, -2, 16).union(&eps), c.set.union(&eps));
    }

    #[test]
    fn sparse_seed_never_closes() {
        let e = iv((1, 1), (3, 2));
        match waveletset_sigma(&e, 2, 16) {
            Err(Error::NonTerminating { budget, partial }) => {
                assert_eq!(budget, 16);
                assert_eq!(partial, truncated_union(&e, 2, 16));
            }
            other => panic!("{other:?}"),
        }
        // a positive-only seed needs nothing on the negative side
        let c = waveletset_sigma(&iv((1, 1), (2, 1)), 2, 16).unwrap();
        assert_eq!(c.set, iv((0, 1), (1, 1)));
    }

    #[test]
    fn seed_classes() {
        assert_eq!(
            classify_waveletset_seed(&iv((-1, 1), (1, 1)), 2).class,
            SeedClass::Orthonormal
        );
        assert_eq!(classify_waveletset_seed(&iv((-1, 2), (1, 2)), 2).class, SeedClass::Ntf);
        assert!(matches!(
            classify_waveletset_seed(&iv((0, 1), (1, 1)), 2).class,
            SeedClass::NotAdmissible { .. }
        ));
        assert_eq!(
            classify_waveletset_seed(&iv((-2, 1), (2, 1)), 2).class,
            SeedClass::MultiNtf { layers: 2 }
        );
        let journe = waveletset_sigma(&journe_set(), 2, 64).unwrap().set;
        assert_eq!(classify_waveletset_seed(&journe, 2).class, SeedClass::Orthonormal);
        // not nested: E ⊄ 2E
        let e = iv((-1, 1), (1, 1)).union(&iv((3, 1), (4, 1)));
        assert!(matches!(
            classify_waveletset_seed(&e, 2).class,
            SeedClass::NotAdmissible { .. }
        ));
    }
}
