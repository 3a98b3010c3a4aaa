use crate::arith::{dilation_power, format_rational, int, IntervalSet, PiRational, Rational};
use crate::folding::per_multiplicity;
use crate::report::{Check, VerificationReport, Witness};

use super::report;

/// Disjointness of the E_i, injectivity of each E_i modulo 2, and tiling of
/// [−W, −ε) ∪ [ε, W) by the dilates a^j(∪E_i), with ε = W·|a|^{−j_range}.
pub fn check_waveletset(sets: &[IntervalSet], a: i64, window: &Rational, j_range: i64) -> VerificationReport {
    let checks = vec![
        pairwise_disjoint(sets),
        translation_injective(sets),
        dilation_tiling(sets, a, window, j_range),
    ];
    let mut r = report("waveletset", checks);
    r.excluded = None;
    r
}

fn pairwise_disjoint(sets: &[IntervalSet]) -> Check {
    let name = "pairwise_disjoint";
    for (i, e) in sets.iter().enumerate() {
        for (j, f) in sets.iter().enumerate().skip(i + 1) {
            let overlap = e.intersect(f);
            if !overlap.is_empty() {
                let w = Witness {
                    region: Some(overlap),
                    ..Witness::default()
                };
                return Check::failed(name, w, format!("sets {i} and {j} overlap"));
            }
        }
    }
    Check::passed(name, format!("{} sets", sets.len()))
}

fn translation_injective(sets: &[IntervalSet]) -> Check {
    let name = "translation_injective";
    for (i, e) in sets.iter().enumerate() {
        let mult = per_multiplicity(e);
        if let Some(cell) = mult.cells().iter().find(|c| c.count() > 1) {
            let region = IntervalSet::interval(cell.lo.clone(), cell.hi.clone()).translate(cell.shifts[0]);
            let w = Witness {
                k: Some(cell.shifts[1] - cell.shifts[0]),
                region: Some(region),
                ..Witness::default()
            }
            .with_sides(cell.count(), 1);
            return Check::failed(name, w, format!("set {i} meets its own 2k-translate"));
        }
    }
    Check::passed(name, "every set meets its 2k-translates (k != 0) in a null set")
}

fn dilation_tiling(sets: &[IntervalSet], a: i64, window: &Rational, j_range: i64) -> Check {
    let name = "dilation_tiling";
    let e = sets.iter().fold(IntervalSet::empty(), |acc, s| acc.union(s));
    let w = window.clone();
    let eps = &w * dilation_power(a.abs(), -j_range);
    let region = IntervalSet::interval(
        PiRational::from_rational(-w.clone()),
        PiRational::from_rational(-eps.clone()),
    )
    .union(&IntervalSet::interval(
        PiRational::from_rational(eps.clone()),
        PiRational::from_rational(w.clone()),
    ));
    let gap = format!(
        "coverage gap (-eps, eps) with eps = {} left out, measure {}",
        format_rational(&eps),
        format_rational(&(&eps * int(2)))
    );

    let mut pieces: Vec<(PiRational, PiRational)> = Vec::new();
    if let (Some(dist), false) = (e.distance_from_zero(), e.is_empty()) {
        let rad = e.radius();
        let scale = |j: i64| dilation_power(a.abs(), j);
        // a^j E meets the region iff |a|^j·rad > ε and |a|^j·dist < W
        let cap = 4 * j_range.abs() + 64;
        let mut j_lo = 0;
        while j_lo > -cap && &scale(j_lo - 1) * &rad > eps {
            j_lo -= 1;
        }
        let mut j_hi = 0;
        while j_hi < cap && &scale(j_hi + 1) * &dist < w {
            j_hi += 1;
        }
        for j in j_lo..=j_hi {
            let image = e.scale(&dilation_power(a, j)).intersect(&region);
            pieces.extend(image.pieces().iter().cloned());
        }
    }

    let mut cuts: Vec<PiRational> = region.breakpoints();
    for (l, r) in &pieces {
        cuts.push(l.clone());
        cuts.push(r.clone());
    }
    cuts.sort();
    cuts.dedup();
    let mut bad: Option<(PiRational, PiRational, usize)> = None;
    let mut cells = 0;
    for c in cuts.windows(2) {
        let mid = c[0].midpoint(&c[1]);
        if !region.contains(&mid) {
            if bad.is_some() {
                break;
            }
            continue;
        }
        cells += 1;
        let count = pieces.iter().filter(|(l, r)| l <= &mid && &mid < r).count();
        match &mut bad {
            Some((_, hi, n)) if *n == count && hi == &c[0] => *hi = c[1].clone(),
            Some(_) => break,
            None if count != 1 => bad = Some((c[0].clone(), c[1].clone(), count)),
            None => {}
        }
    }
    let mut check = match bad {
        None => Check::passed(name, format!("multiplicity 1 on every cell of the window; {gap}")),
        Some((lo, hi, n)) => {
            let witness = Witness {
                region: Some(IntervalSet::interval(lo, hi)),
                ..Witness::default()
            }
            .with_sides(n, 1);
            let what = if n == 0 { "uncovered" } else { "covered more than once" };
            Check::failed(name, witness, format!("an interval of the window is {what}; {gap}"))
        }
    };
    check.points = cells;
    check.tail_bound = Some(format_rational(&(eps * int(2))));
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::examples::{journe_set, shannon_set};
    use crate::report::Status;

    #[test]
    fn shannon_and_journe_tile() {
        for e in [shannon_set(), journe_set()] {
            let r = check_waveletset(&[e], 2, &int(64), 24);
            assert_eq!(r.status, Status::Pass, "{r:#?}");
        }
        let split = [
            IntervalSet::interval((-2).into(), (-1).into()),
            IntervalSet::interval(1.into(), 2.into()),
        ];
        assert_eq!(check_waveletset(&split, 2, &int(64), 24).status, Status::Pass);
    }

    #[test]
    fn perturbed_shannon_has_double_cover() {
        let e = IntervalSet::interval((-2).into(), (-1).into())
            .union(&IntervalSet::interval(1.into(), PiRational::new(21, 10)));
        let r = check_waveletset(&[e], 2, &int(64), 24);
        let c = r.check("dilation_tiling").unwrap();
        assert_eq!(c.status, Status::Fail);
        let w = c.witness.as_ref().unwrap();
        // some dyadic image of the overlap [2, 21/10) of E and 2E
        let region = w.region.clone().unwrap();
        let target = IntervalSet::interval(2.into(), PiRational::new(21, 10));
        assert!(
            (0..=30).any(|j| region.scale(&dilation_power(2, j)) == target),
            "{region:?}"
        );
        assert_eq!(w.lhs.as_deref(), Some("2"));
    }

    #[test]
    fn overlapping_and_periodic_sets_fail() {
        let a = IntervalSet::interval(1.into(), 2.into());
        let r = check_waveletset(&[a.clone(), a], 2, &int(8), 8);
        assert_eq!(r.check("pairwise_disjoint").unwrap().status, Status::Fail);
        let wide = IntervalSet::interval(1.into(), PiRational::new(7, 2));
        let r = check_waveletset(&[wide], 2, &int(8), 8);
        let c = r.check("translation_injective").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(
            c.witness.as_ref().unwrap().region,
            Some(IntervalSet::interval(1.into(), PiRational::new(3, 2)))
        );
    }

    #[test]
    fn negative_dilation_tiles_with_symmetric_set() {
        // [−2,−1) ∪ [1,2) is symmetric, so (−2)^j E = 2^j E
        let r = check_waveletset(&[shannon_set()], -2, &int(64), 24);
        assert_eq!(r.status, Status::Pass);
    }
}
