//! From a spectral function σ to scaling profiles φ̂_k and wavelet profiles
//! ψ̂_i, plus the wavelet-set variant where σ is an indicator.

pub mod examples;
pub mod waveletset;

use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, int, rat, IntervalSet, PiRational, PiecewiseLinear, Rational, SqrtProfile};
use crate::error::{Error, Result};
use crate::folding::{fold_point, layered_partition, per_multiplicity, window_partition};

pub use examples::{random_admissible_sigma, Example};
pub use waveletset::{
    classify_waveletset_seed, waveletset_sigma, SeedClass, SeedClassification, WaveletSetClosure,
    DEFAULT_FIXPOINT_BUDGET,
};

/// σ together with the dilation a.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralSpec {
    pub dilation: i64,
    pub sigma: PiecewiseLinear,
}

pub fn check_dilation(a: i64) -> Result<()> {
    if a.abs() < 2 {
        return Err(Error::validation("dilation |a| >= 2", format!("got a = {a}")));
    }
    Ok(())
}

impl SpectralSpec {
    pub fn new(sigma: PiecewiseLinear, dilation: i64) -> Result<Self> {
        check_dilation(dilation)?;
        Ok(SpectralSpec { dilation, sigma })
    }

    /// σ(ξ/a) − σ(ξ).
    pub fn difference(&self) -> PiecewiseLinear {
        self.sigma.dilate(&rat(1, self.dilation)).sub(&self.sigma)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Nonnegative,
    DilationDecreasing,
    BoundedPeriodization,
    LimitOneAtZero,
    BoundedSupport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub condition: Condition,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PiRational>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub conditions: Vec<ConditionResult>,
    /// max Per(χ_K) for K = supp(σ(·/a) − σ).
    pub periodization_bound: usize,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| !c.holds)
    }
}

/// Decides every admissibility condition exactly. For a bounded
/// piecewise-linear σ the limit conditions reduce to the one-sided values
/// at 0 and to the support being bounded.
pub fn admissibility_check(spec: &SpectralSpec) -> AdmissibilityReport {
    let sigma = &spec.sigma;
    let mut conditions = Vec::with_capacity(5);

    let w = sigma.negative_witness();
    conditions.push(ConditionResult {
        condition: Condition::Nonnegative,
        holds: w.is_none(),
        detail: match &w {
            Some(x) => format!("sigma({x}) = {}", format_rational(&sigma.eval(x))),
            None => "sigma >= 0 at every breakpoint".into(),
        },
        witness: w,
    });

    let dec = sigma.sub(&sigma.dilate_int(spec.dilation));
    let w = dec.negative_witness();
    conditions.push(ConditionResult {
        condition: Condition::DilationDecreasing,
        holds: w.is_none(),
        detail: match &w {
            Some(x) => format!("sigma(a*{x}) - sigma({x}) = {}", format_rational(&-dec.eval(x))),
            None => "sigma(a xi) <= sigma(xi) everywhere".into(),
        },
        witness: w,
    });

    let k_set = spec.difference().support();
    let p = per_multiplicity(&k_set).max();
    conditions.push(ConditionResult {
        condition: Condition::BoundedPeriodization,
        holds: true,
        witness: None,
        detail: format!("max Per(chi_K) = {p}"),
    });

    let zero = PiRational::zero();
    let (left, right) = (sigma.left_limit(&zero), sigma.right_limit(&zero));
    let one = int(1);
    let holds = left == one && right == one;
    conditions.push(ConditionResult {
        condition: Condition::LimitOneAtZero,
        holds,
        witness: (!holds).then(PiRational::zero),
        detail: format!(
            "left limit {} and right limit {} at 0",
            format_rational(&left),
            format_rational(&right)
        ),
    });

    conditions.push(ConditionResult {
        condition: Condition::BoundedSupport,
        holds: true,
        witness: None,
        detail: format!("support radius {}", format_rational(&sigma.support().radius())),
    });

    AdmissibilityReport {
        conditions,
        periodization_bound: p,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedProfile {
    pub k: i64,
    pub profile: SqrtProfile,
}

/// φ̂_k = √σ on [2k−1, 2k+1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingFamily {
    pub dilation: i64,
    pub phis: Vec<IndexedProfile>,
}

impl ScalingFamily {
    pub fn profiles(&self) -> Vec<SqrtProfile> {
        self.phis.iter().map(|p| p.profile.clone()).collect()
    }

    /// Σ_k |φ̂_k|².
    pub fn spectral_function(&self) -> PiecewiseLinear {
        sum_of_squares(self.phis.iter().map(|p| &p.profile))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionRule {
    /// As few layers as the periodization allows.
    #[default]
    Layered,
    /// K ∩ ([−1, 1) + 2k).
    Windows,
}

impl std::str::FromStr for PartitionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "layered" => Ok(PartitionRule::Layered),
            "windows" => Ok(PartitionRule::Windows),
            other => Err(Error::parse(
                "partition rule",
                format!("unknown rule {other:?}, expected layered or windows"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveletFamily {
    pub dilation: i64,
    pub sigma: PiecewiseLinear,
    pub partition: Vec<IntervalSet>,
    pub psis: Vec<SqrtProfile>,
}

impl WaveletFamily {
    /// Σ_i |ψ̂_i|².
    pub fn energy(&self) -> PiecewiseLinear {
        sum_of_squares(self.psis.iter())
    }

    /// Every ψ̂_i multiplied by c.
    pub fn scaled(&self, c: &Rational) -> Self {
        WaveletFamily {
            psis: self.psis.iter().map(|p| p.scaled(c)).collect(),
            ..self.clone()
        }
    }
}

pub fn sum_of_squares<'a>(profiles: impl Iterator<Item = &'a SqrtProfile>) -> PiecewiseLinear {
    profiles.fold(PiecewiseLinear::zero(), |acc, p| acc.add(p.square()))
}

pub fn build_scaling(spec: &SpectralSpec) -> Result<ScalingFamily> {
    let support = spec.sigma.support();
    let mut phis = Vec::new();
    if let Some((lo, hi)) = support.hull() {
        for k in fold_point(&lo).1..=fold_point(&hi).1 {
            let window = IntervalSet::interval(PiRational::integer(2 * k - 1), PiRational::integer(2 * k + 1));
            let profile = SqrtProfile::new(spec.sigma.clone(), support.intersect(&window))?;
            if !profile.is_zero() {
                phis.push(IndexedProfile { k, profile });
            }
        }
    }
    Ok(ScalingFamily {
        dilation: spec.dilation,
        phis,
    })
}

/// |ψ̂_i|² = σ(ξ/a) − σ(ξ) on K_i, with ψ̂_i ≥ 0.
pub fn build_wavelets(spec: &SpectralSpec, rule: PartitionRule) -> Result<WaveletFamily> {
    let diff = spec.difference();
    if let Some(w) = diff.negative_witness() {
        return Err(Error::validation(
            "sigma(xi/a) - sigma(xi) >= 0",
            format!("value {} at xi = {w}", format_rational(&diff.eval(&w))),
        ));
    }
    let k_set = diff.support();
    let partition = match rule {
        PartitionRule::Layered => layered_partition(&k_set),
        PartitionRule::Windows => window_partition(&k_set),
    };
    let mut psis = Vec::with_capacity(partition.len());
    for piece in &partition {
        let p = SqrtProfile::new(diff.clone(), piece.clone())?;
        if !p.is_zero() {
            psis.push(p);
        }
    }
    Ok(WaveletFamily {
        dilation: spec.dilation,
        sigma: spec.sigma.clone(),
        partition,
        psis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Affine, Piece};
    use crate::construction::examples::{example_pwl, shannon_sigma, tent_sigma};

    fn spec(sigma: PiecewiseLinear, a: i64) -> SpectralSpec {
        SpectralSpec::new(sigma, a).unwrap()
    }

    #[test]
    fn dilation_must_expand() {
        assert!(SpectralSpec::new(shannon_sigma(), 1).is_err());
        assert!(SpectralSpec::new(shannon_sigma(), -1).is_err());
        assert!(SpectralSpec::new(shannon_sigma(), -2).is_ok());
    }

    #[test]
    fn admissible_examples_pass() {
        for s in [
            shannon_sigma(),
            example_pwl(&rat(1, 2), &rat(1, 2)),
            example_pwl(&rat(1, 3), &rat(5, 2)),
            tent_sigma(),
        ] {
            let r = admissibility_check(&spec(s, 2));
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn missing_mass_at_zero_fails_the_limit() {
        let s = PiecewiseLinear::indicator(&IntervalSet::interval(1.into(), 2.into()), int(1));
        let r = admissibility_check(&spec(s, 2));
        let f = r.first_failure().unwrap();
        assert_eq!(f.condition, Condition::DilationDecreasing);
        let lim = r
            .conditions
            .iter()
            .find(|c| c.condition == Condition::LimitOneAtZero)
            .unwrap();
        assert!(!lim.holds);
        assert!(lim.detail.contains("right limit 0/1"));
    }

    #[test]
    fn increasing_sigma_fails_decrease() {
        // σ = 1 on [−1, 1) plus a bump on [3, 4) that σ(2ξ) moves onto [3/2, 2)
        let s = PiecewiseLinear::new(vec![
            Piece::new((-1).into(), 1.into(), Affine::constant(int(1))),
            Piece::new(3.into(), 4.into(), Affine::constant(int(1))),
        ])
        .unwrap();
        let r = admissibility_check(&spec(s.clone(), 2));
        let f = r.first_failure().unwrap();
        assert_eq!(f.condition, Condition::DilationDecreasing);
        let w = f.witness.clone().unwrap();
        assert!(s.dilate_int(2).eval(&w) > s.eval(&w));
    }

    #[test]
    fn example_sigma_values() {
        let s = example_pwl(&int(1), &int(1));
        assert_eq!(s.eval(&PiRational::new(1, 2)), rat(1, 2));
        assert_eq!(s.eval(&PiRational::zero()), int(1));
        assert_eq!(s.eval(&PiRational::integer(5)), int(0));
        assert!(s.sub(&s.dilate_int(2)).is_nonnegative());
    }

    #[test]
    fn shannon_scaling_and_wavelet() {
        let sp = spec(shannon_sigma(), 2);
        let phi = build_scaling(&sp).unwrap();
        assert_eq!(phi.phis.len(), 1);
        assert_eq!(phi.phis[0].k, 0);
        assert_eq!(
            phi.phis[0].profile,
            SqrtProfile::indicator(&IntervalSet::interval((-1).into(), 1.into()))
        );
        let psi = build_wavelets(&sp, PartitionRule::Layered).unwrap();
        let e = IntervalSet::interval((-2).into(), (-1).into()).union(&IntervalSet::interval(1.into(), 2.into()));
        assert_eq!(psi.psis, vec![SqrtProfile::indicator(&e)]);
    }

    #[test]
    fn tent_scaling_uses_three_windows() {
        let phi = build_scaling(&spec(tent_sigma(), 2)).unwrap();
        let ks: Vec<i64> = phi.phis.iter().map(|p| p.k).collect();
        assert_eq!(ks, vec![-1, 0, 1]);
        assert_eq!(phi.spectral_function(), tent_sigma());
    }

    #[test]
    fn eta_is_the_single_wavelet() {
        let sp = spec(example_pwl(&rat(1, 2), &rat(1, 2)), 2);
        let fam = build_wavelets(&sp, PartitionRule::Layered).unwrap();
        assert_eq!(fam.psis.len(), 1);
        let eta = &fam.psis[0];
        assert_eq!(eta.square_at(&PiRational::new(-1, 2)), rat(1, 2));
        assert_eq!(eta.square_at(&PiRational::new(-1, 4)), rat(1, 4));
        assert_eq!(eta.support(), IntervalSet::interval((-1).into(), 1.into()));
        let phi = build_scaling(&sp).unwrap();
        assert_eq!(phi.phis.len(), 1);
        assert_eq!(phi.spectral_function(), sp.sigma);
    }

    #[test]
    fn wide_example_needs_several_wavelets() {
        let sp = spec(example_pwl(&int(2), &int(2)), 2);
        let windows = build_wavelets(&sp, PartitionRule::Windows).unwrap();
        assert_eq!(windows.psis.len(), 5);
        let layered = build_wavelets(&sp, PartitionRule::Layered).unwrap();
        assert_eq!(layered.psis.len(), 4);
        for fam in [&windows, &layered] {
            assert_eq!(fam.energy(), sp.difference());
            for p in &fam.psis {
                assert!(per_multiplicity(&p.support()).max() <= 1);
            }
        }
    }
}
