//! Periodization of sets: folding into the fundamental domain [−1, 1) (π
//! units), the multiplicity Per(χ_K), and splitting K into layers that are
//! each injective modulo 2π.

use serde::Serialize;

use crate::arith::{floor_i64, int, IntervalSet, PiRational};

/// Piecewise-constant multiplicity on [−1, 1). Cells are half-open, ascending
/// and cover the whole fundamental domain; `shifts` lists, for every cell,
/// the k with cell + 2k ⊂ K in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldedMultiplicity {
    cells: Vec<FoldedCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldedCell {
    pub lo: PiRational,
    pub hi: PiRational,
    pub shifts: Vec<i64>,
}

impl FoldedCell {
    pub fn count(&self) -> usize {
        self.shifts.len()
    }
}

impl FoldedMultiplicity {
    pub fn cells(&self) -> &[FoldedCell] {
        &self.cells
    }

    /// p = max Per(χ_K).
    pub fn max(&self) -> usize {
        self.cells.iter().map(FoldedCell::count).max().unwrap_or(0)
    }

    /// Multiplicity at ξ, folded into [−1, 1) first.
    pub fn at(&self, xi: &PiRational) -> usize {
        let folded = fold_point(xi).0;
        self.cells
            .iter()
            .find(|c| c.lo <= folded && folded < c.hi)
            .map_or(0, FoldedCell::count)
    }

    /// {ξ ∈ [−1, 1) : Per(χ_K)(ξ) ≥ m}.
    pub fn at_least(&self, m: usize) -> IntervalSet {
        IntervalSet::from_pieces(
            self.cells
                .iter()
                .filter(|c| c.count() >= m)
                .map(|c| (c.lo.clone(), c.hi.clone())),
        )
    }

    /// True when Per(χ_K) = m on all of [−1, 1).
    pub fn is_constant(&self, m: usize) -> bool {
        self.cells.iter().all(|c| c.count() == m)
    }

    /// ∫ Per(χ_K) over [−1, 1), which equals the measure of K.
    pub fn integral(&self) -> crate::arith::Rational {
        self.cells.iter().fold(int(0), |acc, c| {
            acc + (c.hi.value() - c.lo.value()) * int(c.count() as i64)
        })
    }
}

/// ξ = folded + 2k with folded ∈ [−1, 1).
pub fn fold_point(xi: &PiRational) -> (PiRational, i64) {
    let k = floor_i64(&((xi.value() + int(1)) / int(2)));
    (xi.shift_periods(-k), k)
}

/// Splits K along the windows [2k−1, 2k+1) and folds each part back.
fn folded_parts(k_set: &IntervalSet) -> Vec<(PiRational, PiRational, i64)> {
    let mut parts = Vec::new();
    for (l, r) in k_set.pieces() {
        let mut k = fold_point(l).1;
        loop {
            let w_lo = PiRational::integer(2 * k - 1);
            let w_hi = PiRational::integer(2 * k + 1);
            if &w_lo >= r {
                break;
            }
            let lo = if l > &w_lo { l.clone() } else { w_lo };
            let hi = if r < &w_hi { r.clone() } else { w_hi };
            if lo < hi {
                parts.push((lo.shift_periods(-k), hi.shift_periods(-k), k));
            }
            k += 1;
        }
    }
    parts
}

pub fn per_multiplicity(k_set: &IntervalSet) -> FoldedMultiplicity {
    let parts = folded_parts(k_set);
    let mut cuts: Vec<PiRational> = vec![PiRational::integer(-1), PiRational::integer(1)];
    for (lo, hi, _) in &parts {
        cuts.push(lo.clone());
        cuts.push(hi.clone());
    }
    cuts.sort();
    cuts.dedup();
    let mut cells = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let mut shifts: Vec<i64> = parts
            .iter()
            .filter(|(lo, hi, _)| lo <= &w[0] && w[1] <= *hi)
            .map(|(_, _, k)| *k)
            .collect();
        shifts.sort_unstable();
        cells.push(FoldedCell {
            lo: w[0].clone(),
            hi: w[1].clone(),
            shifts,
        });
    }
    // merge neighbouring cells that carry the same shifts
    let mut merged: Vec<FoldedCell> = Vec::with_capacity(cells.len());
    for c in cells {
        match merged.last_mut() {
            Some(last) if last.shifts == c.shifts && last.hi == c.lo => last.hi = c.hi,
            _ => merged.push(c),
        }
    }
    FoldedMultiplicity { cells: merged }
}

/// Layers K_1..K_p: for each folded cell the congruent copies inside K are
/// handed out in ascending position, the lowest to K_1. Layer i then folds
/// onto {Per(χ_K) ≥ i}.
pub fn layered_partition(k_set: &IntervalSet) -> Vec<IntervalSet> {
    let mult = per_multiplicity(k_set);
    let mut layers: Vec<Vec<(PiRational, PiRational)>> = vec![Vec::new(); mult.max()];
    for cell in mult.cells() {
        for (i, k) in cell.shifts.iter().enumerate() {
            layers[i].push((cell.lo.shift_periods(*k), cell.hi.shift_periods(*k)));
        }
    }
    layers.into_iter().map(IntervalSet::from_pieces).collect()
}

/// K ∩ [2k−1, 2k+1) for every k where the intersection is nonempty.
pub fn window_partition(k_set: &IntervalSet) -> Vec<IntervalSet> {
    let Some((lo, hi)) = k_set.hull() else {
        return Vec::new();
    };
    let (k_lo, k_hi) = (fold_point(&lo).1, fold_point(&hi).1);
    (k_lo..=k_hi)
        .map(|k| {
            k_set.intersect(&IntervalSet::interval(
                PiRational::integer(2 * k - 1),
                PiRational::integer(2 * k + 1),
            ))
        })
        .filter(|s| !s.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn iv(l: i64, r: i64) -> IntervalSet {
        IntervalSet::interval(l.into(), r.into())
    }

    /// Multiplicity by direct counting of congruent points of K.
    fn brute_count(k_set: &IntervalSet, xi: &PiRational) -> usize {
        let r = k_set.radius();
        let bound = crate::arith::ceil_i64(&r) + 2;
        (-bound..=bound)
            .filter(|k| k_set.contains(&xi.shift_periods(*k)))
            .count()
    }

    #[test]
    fn fundamental_domain_folds_once() {
        let m = per_multiplicity(&iv(-1, 1));
        assert!(m.is_constant(1));
        assert_eq!(m.max(), 1);
    }

    #[test]
    fn doubled_domain_has_multiplicity_two() {
        let k = iv(-2, 2);
        let m = per_multiplicity(&k);
        assert_eq!(m.max(), 2);
        assert!(m.is_constant(2));
        let layers = layered_partition(&k);
        assert_eq!(layers, vec![iv(-2, 0), iv(0, 2)]);
    }

    #[test]
    fn shannon_set_is_a_single_layer() {
        let k = iv(-2, -1).union(&iv(1, 2));
        let m = per_multiplicity(&k);
        assert!(m.is_constant(1));
        assert_eq!(layered_partition(&k), vec![k]);
    }

    #[test]
    fn journe_set_folds_onto_the_domain() {
        let e = IntervalSet::from_pieces([
            (PiRational::new(-32, 7), PiRational::integer(-4)),
            (PiRational::integer(-1), PiRational::new(-4, 7)),
            (PiRational::new(4, 7), PiRational::integer(1)),
            (PiRational::integer(4), PiRational::new(32, 7)),
        ]);
        assert!(per_multiplicity(&e).is_constant(1));
    }

    #[test]
    fn window_partition_cuts_at_odd_integers() {
        let k = iv(-4, 4);
        let w = window_partition(&k);
        assert_eq!(w.len(), 5);
        assert_eq!(w[0], iv(-4, -3));
        assert_eq!(w[2], iv(-1, 1));
        assert_eq!(layered_partition(&k).len(), 4);
    }

    #[test]
    fn empty_set_has_no_layers() {
        assert!(layered_partition(&IntervalSet::empty()).is_empty());
        assert_eq!(per_multiplicity(&IntervalSet::empty()).max(), 0);
    }

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec((-40i64..40, 1i64..12, 1i64..6), 0..6).prop_map(|v| {
            IntervalSet::from_pieces(
                v.into_iter()
                    .map(|(l, w, d)| (PiRational::new(l, d), PiRational::new(l + w, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn multiplicity_matches_direct_count(k in arb_set(), n in -997i64..997) {
            let xi = PiRational::new(n, 997);
            let m = per_multiplicity(&k);
            prop_assert_eq!(m.at(&xi), brute_count(&k, &xi));
            prop_assert_eq!(m.integral(), k.measure());
        }

        #[test]
        fn layers_partition_and_fold_injectively(k in arb_set()) {
            let layers = layered_partition(&k);
            let m = per_multiplicity(&k);
            prop_assert_eq!(layers.len(), m.max());
            let mut union = IntervalSet::empty();
            let mut total = rat(0, 1);
            for (i, layer) in layers.iter().enumerate() {
                let lm = per_multiplicity(layer);
                prop_assert!(lm.max() <= 1);
                prop_assert_eq!(lm.at_least(1), m.at_least(i + 1));
                total += layer.measure();
                union = union.union(layer);
            }
            prop_assert_eq!(&union, &k);
            prop_assert_eq!(total, k.measure());
        }
    }
}
