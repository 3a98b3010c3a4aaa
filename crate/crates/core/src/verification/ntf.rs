use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, rat, to_f64, PiRational, PiecewiseLinear, Rational, RootSum, SqrtProfile};
use crate::construction::{SpectralSpec, WaveletFamily};
use crate::folding::per_multiplicity;
use crate::report::{Check, Outcome, Status, VerificationReport, Witness};
use crate::trace::{correlation, wavelet_series};

use super::{grid_for, radius, report, run_checks, s_window, VerifyOptions};

/// Scans for J stop here; the tail is then reported as not reached.
const TELESCOPE_J_CAP: i64 = 400;
const NUMERIC_J: i64 = 60;
const NUMERIC_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Rational identities through σ, for families built from σ.
    #[default]
    Exact,
    /// Truncated sums in floating point, for families read from elsewhere.
    Numeric,
}

impl std::str::FromStr for Mode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "numeric" => Ok(Mode::Numeric),
            other => Err(crate::Error::parse(
                "mode",
                format!("unknown mode {other:?}, expected exact or numeric"),
            )),
        }
    }
}

fn energy_at(psis: &[SqrtProfile], x: &PiRational) -> Rational {
    psis.iter().fold(Rational::zero(), |acc, p| acc + p.square_at(x))
}

/// f(a^j t) as t ↓ ξ. Half-open pieces give right limits, but a negative
/// power reflects, so the orbit would otherwise mix conventions at points
/// that land on a breakpoint.
fn orbit_value(f: &PiecewiseLinear, xi: &PiRational, a: i64, j: i64) -> Rational {
    let x = xi.dilate_pow(a, j);
    if a < 0 && j % 2 != 0 {
        f.left_limit(&x)
    } else {
        f.eval(&x)
    }
}

fn orbit_energy(psis: &[SqrtProfile], xi: &PiRational, a: i64, j: i64) -> Rational {
    psis.iter()
        .fold(Rational::zero(), |acc, p| acc + orbit_value(p.square(), xi, a, j))
}

/// Σ_ψ Σ_{j∈ℤ} |ψ̂|²(a^j ξ) = 1 and the cross-scale identity
/// Σ_ψ Σ_{j≥0} ψ̂(a^j ξ) ψ̂(a^j(ξ + 2s)) = 0 for s ∉ aℤ.
pub fn check_ntf_multiwavelet(fam: &WaveletFamily, mode: Mode, opts: &VerifyOptions) -> VerificationReport {
    let a = fam.dilation;
    let squares: Vec<_> = fam.psis.iter().map(|p| p.square()).chain([&fam.sigma]).collect();
    let grid = grid_for(&squares, a, opts);
    let mut checks = Vec::new();
    match mode {
        Mode::Exact => {
            checks.push(telescoping_identity(fam));
            checks.push(energy_sum_exact(fam, &grid));
        }
        Mode::Numeric => checks.push(energy_sum_numeric(fam, &grid)),
    }
    checks.push(cross_scale(&fam.psis, a, &grid, opts.bits));
    report("ntf", checks)
}

/// Σ|ψ̂_i|² = σ(·/a) − σ as piecewise-linear functions.
fn telescoping_identity(fam: &WaveletFamily) -> Check {
    let name = "telescoping_identity";
    let diff = match SpectralSpec::new(fam.sigma.clone(), fam.dilation) {
        Ok(spec) => spec.difference(),
        Err(e) => return Check::failed(name, Witness::default(), e.to_string()),
    };
    let energy = fam.energy();
    let residual = energy.sub(&diff);
    match residual.pieces().iter().find(|p| !p.affine.is_zero()) {
        None => Check::passed(name, "exact equality of piecewise-linear functions"),
        Some(p) => {
            // an affine map vanishes at one point at most, so one of two
            // interior points witnesses it
            let third = PiRational::from_rational((p.hi.value() - p.lo.value()) / Rational::from_integer(3.into()));
            let x1 = &p.lo + &third;
            let x = if residual.eval(&x1).is_zero() { &x1 + &third } else { x1 };
            let w = Witness::at(&x).with_sides(format_rational(&energy.eval(&x)), format_rational(&diff.eval(&x)));
            let mut c = Check::failed(name, w, "sum of squares differs from sigma(xi/a) - sigma(xi)");
            c.points = 1;
            c
        }
    }
}

/// Partial sums P_J = Σ_{|j|≤J} compared exactly with σ(a^{−J−1}ξ) − σ(a^J ξ);
/// J grows until the exact tail 1 − σ(a^{−J−1}ξ) + σ(a^J ξ) drops below 10⁻⁹.
fn energy_sum_exact(fam: &WaveletFamily, grid: &[PiRational]) -> Check {
    let a = fam.dilation;
    let sigma = &fam.sigma;
    let target = rat(1, 1_000_000_000);
    let limits = [
        sigma.left_limit(&PiRational::zero()),
        sigma.right_limit(&PiRational::zero()),
    ];
    // inside (−δ, δ) σ is affine on each side of 0
    let delta = sigma
        .breakpoints()
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| b.value().abs())
        .min();
    // a one-sided limit ≠ 1 reached by the orbit of ξ; a negative dilation
    // visits both sides
    let off_limit = |xi: &PiRational, j: i64| -> Option<&Rational> {
        let side = usize::from(xi.dilate_pow(a, -j - 1).is_positive());
        if a < 0 {
            limits.iter().find(|l| !l.is_one())
        } else {
            Some(&limits[side]).filter(|l| !l.is_one())
        }
    };
    let rows: Vec<(Outcome, Option<Rational>)> = grid
        .par_iter()
        .map(|xi| {
            let mut partial = energy_at(&fam.psis, xi);
            let mut tail = None;
            let mut j = 0;
            while j < TELESCOPE_J_CAP {
                j += 1;
                partial += orbit_energy(&fam.psis, xi, a, j) + orbit_energy(&fam.psis, xi, a, -j);
                let inner = orbit_value(sigma, xi, a, -j - 1);
                let outer = orbit_value(sigma, xi, a, j);
                let t = Rational::one() - &inner + &outer;
                let near_zero = delta
                    .as_ref()
                    .is_none_or(|d| xi.dilate_pow(a, -j - 1).value().abs() < *d);
                if near_zero && outer.is_zero() && off_limit(xi, j).is_some() {
                    break;
                }
                if t.abs() < target {
                    tail = Some(t.abs());
                    let rhs = inner - outer;
                    let o = if partial == rhs {
                        Outcome::pass()
                    } else {
                        Outcome {
                            status: Status::Fail,
                            residual: Some(to_f64(&(&partial - &rhs).abs())),
                            witness: Some(
                                Witness::at(xi)
                                    .with_j(j)
                                    .with_sides(format_rational(&partial), format_rational(&rhs)),
                            ),
                        }
                    };
                    return (o, tail);
                }
            }
            // the tail did not close: the partial sums tend to the one-sided
            // limits of σ at 0 visited by the orbit
            let o = match off_limit(xi, j) {
                Some(side) => Outcome {
                    status: Status::Fail,
                    residual: Some(to_f64(&(Rational::one() - side).abs())),
                    witness: Some(Witness::at(xi).with_j(j).with_sides(format_rational(side), "1/1")),
                },
                None => Outcome {
                    status: Status::Uncertain,
                    residual: None,
                    witness: Some(Witness::at(xi).with_j(j)),
                },
            };
            (o, tail)
        })
        .collect();
    let mut check = Check::new("energy_sum");
    let mut worst_tail: Option<Rational> = None;
    for (o, t) in rows {
        check.record(o);
        if let Some(t) = t {
            if worst_tail.as_ref().is_none_or(|w| &t > w) {
                worst_tail = Some(t);
            }
        }
    }
    check.tail_bound = worst_tail.map(|t| format_rational(&t));
    check.detail = Some("partial sums over |j| <= J compared exactly with the telescoped sigma values".into());
    check
}

fn energy_sum_numeric(fam: &WaveletFamily, grid: &[PiRational]) -> Check {
    let a = fam.dilation;
    let r = radius(&fam.psis);
    let mut check = super::run_checks(&["energy_sum"], grid, |xi| {
        let mut total = 0.0;
        for j in -NUMERIC_J..=NUMERIC_J {
            let x = xi.dilate_pow(a, j);
            if x.value().abs() > r {
                break;
            }
            total += to_f64(&energy_at(&fam.psis, &x));
        }
        vec![Outcome::numeric(total, 1.0, NUMERIC_TOLERANCE, || Witness::at(xi))]
    })
    .remove(0);
    check.detail = Some(format!("scales |j| <= {NUMERIC_J} summed in floating point"));
    check
}

/// Certified when every support is injective mod 2; then each term pairs
/// two distinct points of one support that differ by a period multiple.
fn cross_scale(psis: &[SqrtProfile], a: i64, grid: &[PiRational], bits: u32) -> Check {
    let name = "cross_scale_orthogonality";
    if psis.iter().all(|p| per_multiplicity(&p.support()).max() <= 1) {
        return Check::passed(name, "every support meets its 2-translates in a null set");
    }
    let s_max = s_window(&radius(psis));
    let j_max = 128;
    let mut check = run_checks(&[name], grid, |xi| {
        let mut out = Outcome::pass();
        for s in (-s_max..=s_max).filter(|s| s % a != 0) {
            let lhs = correlation(psis, s, xi).add(&wavelet_series(psis, a, s, xi, j_max));
            out = out.keep_worse(Outcome::exact(&lhs, &RootSum::zero(), bits, || {
                Witness::at(xi).with_s(s)
            }));
        }
        vec![out]
    })
    .remove(0);
    check.detail = Some(format!("s in -{s_max}..={s_max} off aZ"));
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::construction::examples::{example_pwl, shannon_sigma};
    use crate::construction::{build_wavelets, PartitionRule};

    fn family(sigma: crate::arith::PiecewiseLinear, a: i64) -> WaveletFamily {
        build_wavelets(&SpectralSpec::new(sigma, a).unwrap(), PartitionRule::Layered).unwrap()
    }

    #[test]
    fn shannon_passes_with_zero_tails() {
        let r = check_ntf_multiwavelet(&family(shannon_sigma(), 2), Mode::Exact, &VerifyOptions::default());
        assert_eq!(r.status, Status::Pass, "{r:#?}");
        assert_eq!(r.check("energy_sum").unwrap().tail_bound.as_deref(), Some("0/1"));
    }

    #[test]
    fn eta_family_passes_with_small_tail() {
        let fam = family(example_pwl(&rat(1, 2), &rat(1, 2)), 2);
        let opts = VerifyOptions {
            grid: crate::grid::GridSpec::default().with_random_points(200),
            ..Default::default()
        };
        let r = check_ntf_multiwavelet(&fam, Mode::Exact, &opts);
        assert_eq!(r.status, Status::Pass, "{r:#?}");
        let c = r.check("energy_sum").unwrap();
        assert!(c.points >= 200);
        let tail = crate::arith::parse_rational(c.tail_bound.as_deref().unwrap()).unwrap();
        assert!(tail < rat(1, 1_000_000_000) && tail.is_positive());
        assert_eq!(check_ntf_multiwavelet(&fam, Mode::Numeric, &opts).status, Status::Pass);
    }

    #[test]
    fn scaled_family_fails_with_witness() {
        let fam = family(example_pwl(&rat(1, 2), &rat(1, 2)), 2).scaled(&rat(101, 100));
        let r = check_ntf_multiwavelet(&fam, Mode::Exact, &VerifyOptions::default());
        assert_eq!(r.status, Status::Fail);
        for name in ["telescoping_identity", "energy_sum"] {
            let c = r.check(name).unwrap();
            assert_eq!(c.status, Status::Fail);
            assert!(c.witness.as_ref().unwrap().lhs.is_some());
        }
        // lhs is 1.0201 times the rhs at the witness
        let w = r.check("energy_sum").unwrap().witness.clone().unwrap();
        let lhs = crate::arith::parse_rational(&w.lhs.unwrap()).unwrap();
        let rhs = crate::arith::parse_rational(&w.rhs.unwrap()).unwrap();
        assert_eq!(lhs, rhs * rat(10201, 10000));
        assert_eq!(
            check_ntf_multiwavelet(&fam, Mode::Numeric, &VerifyOptions::default()).status,
            Status::Fail
        );
    }

    #[test]
    fn halved_sigma_misses_unit_energy() {
        let sigma = example_pwl(&rat(1, 2), &rat(1, 2)).scale_values(&rat(1, 2));
        let fam = family(sigma, 2);
        let r = check_ntf_multiwavelet(&fam, Mode::Exact, &VerifyOptions::default());
        let c = r.check("energy_sum").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.witness.as_ref().unwrap().lhs.as_deref(), Some("1/2"));
    }

    #[test]
    fn overlapping_supports_are_evaluated() {
        // χ_[0,3) overlaps its own 2-translate, so the cross-scale sums are
        // evaluated pointwise and do not vanish
        let psi = SqrtProfile::indicator(&crate::arith::IntervalSet::interval(0.into(), 3.into()));
        let c = cross_scale(&[psi], 2, &[PiRational::new(1, 2)], 64);
        assert_eq!(c.status, Status::Fail);
    }
}
