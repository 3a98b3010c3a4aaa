use num_traits::{One, Signed, Zero};

use crate::arith::{format_rational, int, PiRational, PiecewiseLinear, Rational, SqrtProfile};
use crate::construction::{sum_of_squares, ScalingFamily, WaveletFamily};
use crate::report::{Check, Outcome, Status, VerificationReport, Witness};
use crate::trace::correlation;

use super::{grid_for, radius, report, run_checks, s_window, VerifyOptions};

fn squares<'a>(phis: &'a [SqrtProfile], psis: &'a [SqrtProfile]) -> Vec<&'a PiecewiseLinear> {
    phis.iter().chain(psis).map(|p| p.square()).collect()
}

/// Per grid point: the two correlation identities, worst s first found.
fn correlation_outcomes(
    phis: &[SqrtProfile],
    psis: &[SqrtProfile],
    a: i64,
    s_max: i64,
    xi: &PiRational,
    bits: u32,
) -> Vec<Outcome> {
    let mut off = Outcome::pass();
    let mut on = Outcome::pass();
    let inner = xi.scale(&Rational::new(1.into(), a.into()));
    for s in -s_max..=s_max {
        let w = || Witness::at(xi).with_s(s);
        let scaling = correlation(phis, s, xi);
        let wavelet = correlation(psis, s, xi);
        if s % a != 0 {
            off = off.keep_worse(Outcome::exact(&scaling.neg(), &wavelet, bits, w));
        } else {
            let refined = correlation(phis, s / a, &inner);
            on = on.keep_worse(Outcome::exact(&refined.sub(&scaling), &wavelet, bits, w));
        }
    }
    vec![off, on]
}

fn pair_checks(
    phis: &[SqrtProfile],
    psis: &[SqrtProfile],
    a: i64,
    grid: &[PiRational],
    opts: &VerifyOptions,
) -> Vec<Check> {
    let r = radius(psis).max(radius(phis) * int(a.abs()));
    let s_max = s_window(&r);
    let mut checks = run_checks(&["correlation_off_lattice", "correlation_on_lattice"], grid, |xi| {
        correlation_outcomes(phis, psis, a, s_max, xi, opts.bits)
    });
    for c in &mut checks {
        c.detail = Some(format!("|s| <= {s_max}"));
    }
    checks
}

/// −Σ_φ φ̂(ξ)φ̂(ξ+2s) = Σ_ψ ψ̂(ξ)ψ̂(ξ+2s) for s ∉ aℤ, and
/// Σ_φ φ̂(ξ/a)φ̂((ξ+2s)/a) − Σ_φ φ̂(ξ)φ̂(ξ+2s) = Σ_ψ ψ̂(ξ)ψ̂(ξ+2s) for s ∈ aℤ.
pub fn check_scaling_wavelet_pair(
    phi: &ScalingFamily,
    psi: &WaveletFamily,
    opts: &VerifyOptions,
) -> VerificationReport {
    let (phis, a) = (phi.profiles(), phi.dilation);
    if let Some(c) = dilation_mismatch(phi, psi) {
        return report("scaling_wavelet", vec![c]);
    }
    let grid = grid_for(&squares(&phis, &psi.psis), a, opts);
    report("scaling_wavelet", pair_checks(&phis, &psi.psis, a, &grid, opts))
}

fn dilation_mismatch(phi: &ScalingFamily, psi: &WaveletFamily) -> Option<Check> {
    (phi.dilation != psi.dilation).then(|| {
        Check::failed(
            "shared_dilation",
            Witness::default().with_sides(phi.dilation, psi.dilation),
            "scaling and wavelet families use different dilations",
        )
    })
}

/// Smallest j ≥ 0 with a^{j'}ξ outside the support hull for every j' ≥ j.
/// `None` for ξ = 0, which the dilations fix.
pub fn exit_index(phis: &[SqrtProfile], a: i64, xi: &PiRational) -> Option<i64> {
    if xi.is_zero() {
        return None;
    }
    let hull = phis
        .iter()
        .filter_map(|p| p.domain().hull())
        .reduce(|(l1, h1), (l2, h2)| (l1.min(l2), h1.max(h2)));
    let Some((lo, hi)) = hull else {
        return Some(0);
    };
    let inside = |x: &PiRational| &lo <= x && x < &hi;
    let r = lo.value().abs().max(hi.value().abs());
    let mut j = 0;
    while xi.dilate_pow(a, j).value().abs() <= r {
        j += 1;
    }
    while j > 0 && !inside(&xi.dilate_pow(a, j - 1)) {
        j -= 1;
    }
    Some(j)
}

fn decay_check(phis: &[SqrtProfile], a: i64, grid: &[PiRational]) -> Check {
    let spectral = sum_of_squares(phis.iter());
    let indices: Vec<i64> = grid.iter().filter_map(|xi| exit_index(phis, a, xi)).collect();
    let mut check = run_checks(&["scaling_decay"], grid, |xi| {
        let Some(j) = exit_index(phis, a, xi) else {
            return vec![Outcome::pass()];
        };
        // the sum vanishes from the exit index on; two further scales are
        // evaluated as a guard
        for jj in j..j + 3 {
            let v = spectral.eval(&xi.dilate_pow(a, jj));
            if !v.is_zero() {
                return vec![Outcome {
                    status: Status::Fail,
                    residual: None,
                    witness: Some(Witness::at(xi).with_j(jj).with_sides(format_rational(&v), "0/1")),
                }];
            }
        }
        vec![Outcome::pass()]
    })
    .remove(0);
    if let (Some(lo), Some(hi)) = (indices.iter().min(), indices.iter().max()) {
        check.detail = Some(format!(
            "exit indices {lo}..={hi}; xi = 0 is fixed by dilation and excluded"
        ));
    }
    check
}

fn limit_check(phis: &[SqrtProfile]) -> Check {
    let name = "scaling_limit_at_zero";
    let spectral = sum_of_squares(phis.iter());
    let zero = PiRational::zero();
    let sides = [
        ("left", spectral.left_limit(&zero)),
        ("right", spectral.right_limit(&zero)),
    ];
    match sides.iter().find(|(_, v)| !v.is_one()) {
        None => Check::passed(name, "both one-sided limits at 0 equal 1"),
        Some((side, v)) => Check::failed(
            name,
            Witness::at(&zero).with_sides(format_rational(v), "1/1"),
            format!("{side} limit at 0 is {}", format_rational(v)),
        ),
    }
}

/// The pair identities plus decay of Σ_φ|φ̂|²(a^j ξ) as j → ∞.
pub fn check_with_decay(phi: &ScalingFamily, psi: &WaveletFamily, opts: &VerifyOptions) -> VerificationReport {
    let (phis, a) = (phi.profiles(), phi.dilation);
    if let Some(c) = dilation_mismatch(phi, psi) {
        return report("scaling_decay", vec![c]);
    }
    let grid = grid_for(&squares(&phis, &psi.psis), a, opts);
    let mut checks = pair_checks(&phis, &psi.psis, a, &grid, opts);
    checks.push(decay_check(&phis, a, &grid));
    report("scaling_decay", checks)
}

/// Hypotheses under which a scaling/wavelet pair yields an NTF: local
/// finiteness, the pair identities, decay, and limit 1 at 0.
pub fn check_sufficiency(phi: &ScalingFamily, psi: &WaveletFamily, opts: &VerifyOptions) -> VerificationReport {
    let (phis, a) = (phi.profiles(), phi.dilation);
    if let Some(c) = dilation_mismatch(phi, psi) {
        return report("sufficiency", vec![c]);
    }
    let grid = grid_for(&squares(&phis, &psi.psis), a, opts);
    let mut checks = vec![Check::passed(
        "local_finiteness",
        format!("{} scaling profiles with bounded support", phis.len()),
    )];
    checks.extend(pair_checks(&phis, &psi.psis, a, &grid, opts));
    checks.push(decay_check(&phis, a, &grid));
    checks.push(limit_check(&phis));
    report("sufficiency", checks)
}

/// Σ_φ|φ̂|²(a^{−j}ξ) → 1, and the orbit values are nondecreasing in j.
pub fn check_density(phi: &ScalingFamily, opts: &VerifyOptions) -> VerificationReport {
    let (phis, a) = (phi.profiles(), phi.dilation);
    let spectral = phi.spectral_function();
    let grid = grid_for(&squares(&phis, &[]), a, opts);
    let j_max = opts.j_max;
    let mut orbit = run_checks(&["orbit_monotone"], &grid, |xi| {
        let mut prev = spectral.eval(xi);
        for j in 1..=j_max {
            let v = spectral.eval(&xi.dilate_pow(a, -j));
            if v < prev {
                return vec![Outcome {
                    status: Status::Fail,
                    residual: None,
                    witness: Some(
                        Witness::at(xi)
                            .with_j(j)
                            .with_sides(format_rational(&v), format_rational(&prev)),
                    ),
                }];
            }
            if v.is_one() && prev.is_one() {
                break;
            }
            prev = v;
        }
        vec![Outcome::pass()]
    })
    .remove(0);
    orbit.detail = Some(format!("j in 0..={j_max}, compared exactly"));
    report("density", vec![limit_check(&phis), orbit])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::construction::examples::{example_pwl, shannon_sigma};
    use crate::construction::{build_scaling, build_wavelets, PartitionRule, SpectralSpec};

    fn pair(sigma: PiecewiseLinear) -> (ScalingFamily, WaveletFamily) {
        let spec = SpectralSpec::new(sigma, 2).unwrap();
        (
            build_scaling(&spec).unwrap(),
            build_wavelets(&spec, PartitionRule::Layered).unwrap(),
        )
    }

    #[test]
    fn constructed_pairs_pass() {
        for sigma in [
            shannon_sigma(),
            example_pwl(&rat(1, 2), &rat(1, 2)),
            example_pwl(&int(2), &int(2)),
        ] {
            let (phi, psi) = pair(sigma);
            let o = VerifyOptions::default();
            assert_eq!(check_scaling_wavelet_pair(&phi, &psi, &o).status, Status::Pass);
            assert_eq!(check_with_decay(&phi, &psi, &o).status, Status::Pass);
            let r = check_sufficiency(&phi, &psi, &o);
            assert_eq!(r.status, Status::Pass, "{r:#?}");
            assert_eq!(check_density(&phi, &o).status, Status::Pass);
        }
    }

    #[test]
    fn mismatched_pair_fails_at_zero_shift() {
        let (phi, _) = pair(shannon_sigma());
        let (_, psi) = pair(example_pwl(&rat(1, 2), &rat(1, 2)));
        let r = check_scaling_wavelet_pair(&phi, &psi, &VerifyOptions::default());
        let c = r.check("correlation_on_lattice").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.witness.as_ref().unwrap().s, Some(0));
    }

    #[test]
    fn empty_wavelets_fail_on_lattice() {
        let (phi, mut psi) = pair(shannon_sigma());
        psi.psis.clear();
        let r = check_sufficiency(&phi, &psi, &VerifyOptions::default());
        let c = r.check("correlation_on_lattice").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.witness.as_ref().unwrap().s, Some(0));
    }

    #[test]
    fn halved_sigma_fails_limit() {
        let (phi, psi) = pair(example_pwl(&rat(1, 2), &rat(1, 2)).scale_values(&rat(1, 2)));
        let r = check_sufficiency(&phi, &psi, &VerifyOptions::default());
        let c = r.check("scaling_limit_at_zero").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.witness.as_ref().unwrap().lhs.as_deref(), Some("1/2"));
        assert_eq!(check_density(&phi, &VerifyOptions::default()).status, Status::Fail);
    }

    #[test]
    fn exit_indices() {
        let (phi, _) = pair(shannon_sigma());
        let phis = phi.profiles();
        assert_eq!(exit_index(&phis, 2, &PiRational::new(1, 2)), Some(1));
        assert_eq!(exit_index(&phis, 2, &PiRational::new(3, 16)), Some(3));
        assert_eq!(exit_index(&phis, 2, &PiRational::new(-3, 4)), Some(1));
        assert_eq!(exit_index(&phis, 2, &PiRational::zero()), None);
        let (eta, _) = pair(example_pwl(&rat(1, 2), &rat(1, 2)));
        assert_eq!(exit_index(&eta.profiles(), 2, &PiRational::new(1, 2)), Some(0));
        // the orbit alternates sides under a negative dilation
        assert_eq!(exit_index(&phis, -2, &PiRational::new(-3, 8)), Some(2));
    }

    #[test]
    fn narrow_indicator_is_dense() {
        let sigma = PiecewiseLinear::indicator(
            &crate::arith::IntervalSet::interval(PiRational::new(-1, 4), PiRational::new(1, 4)),
            int(1),
        );
        let (phi, _) = pair(sigma);
        assert_eq!(check_density(&phi, &VerifyOptions::default()).status, Status::Pass);
    }
}
