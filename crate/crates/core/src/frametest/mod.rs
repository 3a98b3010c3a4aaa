//! Numerical frame-energy test: affine-system coefficients by quadrature in
//! the Fourier domain and Σ|⟨f, D^j T_k ψ⟩|² against ‖f‖².

pub mod quadrature;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    dilation_power, int, parse_rational, to_f64, Affine, IntervalSet, PiRational, Piece, PiecewiseLinear, SqrtProfile,
};
use crate::construction::WaveletFamily;
use crate::error::{Error, Result};
use quadrature::{common_segments, integrate_sqrt_ends};

/// Absolute error target per coefficient.
pub const COEFFICIENT_TOLERANCE: f64 = 1e-8;
/// Relative target for the extrapolated k-tail of one scale.
pub const K_TAIL_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_K_BUDGET: i64 = 4096;

/// A test signal given by its Fourier transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestSignal {
    pub hat: PiecewiseLinear,
    label: String,
}

impl TestSignal {
    pub fn new(hat: PiecewiseLinear) -> Result<Self> {
        if hat.is_zero() {
            return Err(Error::Precondition("test signal must be nonzero".into()));
        }
        let label = serde_json::to_string(&hat).unwrap_or_default();
        Ok(TestSignal { hat, label })
    }

    /// Triangle of height 1 peaking at the midpoint of [l, r).
    pub fn tent(l: &PiRational, r: &PiRational) -> Result<Self> {
        if l >= r {
            return Err(Error::parse("tent signal", "needs l < r"));
        }
        let m = l.midpoint(r);
        let half = (m.value() - l.value()).clone();
        let up = Affine::new(half.recip(), -(l.value() / &half));
        let down = Affine::new(-half.recip(), r.value() / &half);
        let hat = PiecewiseLinear::new(vec![
            Piece::new(l.clone(), m.clone(), up),
            Piece::new(m, r.clone(), down),
        ])?;
        let mut s = TestSignal::new(hat)?;
        s.label = format!("tent:[{l},{r})");
        Ok(s)
    }

    /// χ_[l, r).
    pub fn boxcar(l: &PiRational, r: &PiRational) -> Result<Self> {
        if l >= r {
            return Err(Error::parse("box signal", "needs l < r"));
        }
        let hat = PiecewiseLinear::indicator(&IntervalSet::interval(l.clone(), r.clone()), int(1));
        let mut s = TestSignal::new(hat)?;
        s.label = format!("box:[{l},{r})");
        Ok(s)
    }

    /// ‖f‖² = (2π)⁻¹∫|f̂|², i.e. half the integral in π units.
    pub fn norm_sqr(&self) -> f64 {
        to_f64(&self.hat.integral_of_square()) / 2.0
    }
}

impl fmt::Display for TestSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl FromStr for TestSignal {
    type Err = Error;

    /// `tent:[l,r)` or `box:[l,r)` with rational endpoints in π units.
    fn from_str(s: &str) -> Result<Self> {
        let err = |m: &str| Error::parse(format!("signal {s:?}"), m);
        let (kind, rest) = s.trim().split_once(':').ok_or_else(|| err("expected kind:[l,r)"))?;
        let inner = rest
            .trim()
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| err("interval must be written [l,r)"))?;
        let (l, r) = inner
            .split_once(',')
            .ok_or_else(|| err("interval needs two endpoints"))?;
        let l = PiRational::from_rational(parse_rational(l.trim()).map_err(|e| err(&e.to_string()))?);
        let r = PiRational::from_rational(parse_rational(r.trim()).map_err(|e| err(&e.to_string()))?);
        match kind.trim() {
            "tent" => TestSignal::tent(&l, &r),
            "box" => TestSignal::boxcar(&l, &r),
            other => Err(err(&format!("unknown kind {other:?}, expected tent or box"))),
        }
    }
}

/// Integrand data of one scale: f̂(a^j u)·ψ̂(u) on the pieces where both
/// are affine (ψ̂ through its square).
struct ScaleIntegrand {
    segments: Vec<quadrature::Segment>,
    prefactor: f64,
}

impl ScaleIntegrand {
    fn new(f: &TestSignal, psi: &SqrtProfile, a: i64, j: i64) -> Self {
        let hat = f.hat.dilate(&dilation_power(a, j));
        let square = psi.square().restrict(psi.domain());
        ScaleIntegrand {
            segments: common_segments(&[&hat, &square]),
            prefactor: 0.5 * (a.unsigned_abs() as f64).powf(j as f64 / 2.0),
        }
    }

    fn coefficient(&self, k: i64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        let w = std::f64::consts::PI * k as f64;
        for seg in &self.segments {
            let g = |u: f64| {
                let amp = seg.eval(0, u) * seg.eval(1, u).max(0.0).sqrt();
                Complex64::from_polar(amp, w * u)
            };
            total += integrate_sqrt_ends(&g, seg.lo, seg.hi, COEFFICIENT_TOLERANCE / self.prefactor).value;
        }
        total * self.prefactor
    }
}

/// ⟨f, D^j T_k ψ⟩ = ½|a|^{j/2} ∫ f̂(a^j u) ψ̂(u) e^{iπku} du, with
/// D g = |a|^{1/2} g(a·) and T_k g = g(· − k). Exactly 0 without overlap.
pub fn coefficient(f: &TestSignal, psi: &SqrtProfile, a: i64, j: i64, k: i64) -> Complex64 {
    ScaleIntegrand::new(f, psi, a, j).coefficient(k)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaleEnergy {
    pub psi: usize,
    pub j: i64,
    /// Σ_{|k|≤K} |c(j,k)|² at the final K.
    pub partial: f64,
    /// Extrapolated K → ∞ value.
    pub extrapolated: f64,
    pub k_max: i64,
    pub converged: bool,
}

/// k-sums of |c(j,k)|² for K = 8, 16, …, extrapolated to K = ∞ from three
/// consecutive K; stops once two extrapolants agree to `target`.
fn scale_energy(
    f: &TestSignal,
    psi: &SqrtProfile,
    idx: usize,
    a: i64,
    j: i64,
    k_budget: i64,
    target: f64,
) -> ScaleEnergy {
    let integrand = ScaleIntegrand::new(f, psi, a, j);
    if integrand.segments.is_empty() {
        return ScaleEnergy {
            psi: idx,
            j,
            partial: 0.0,
            extrapolated: 0.0,
            k_max: 0,
            converged: true,
        };
    }
    let term = |k: i64| integrand.coefficient(k).norm_sqr();
    let mut sum = term(0);
    let mut last_k = 0;
    let mut extend = |to: i64, sum: &mut f64| {
        let new: Vec<f64> = (last_k + 1..=to).into_par_iter().map(|k| term(k) + term(-k)).collect();
        *sum += new.iter().sum::<f64>();
        last_k = to;
    };
    let mut sums = Vec::new();
    let mut k = 8;
    let mut previous: Option<f64> = None;
    loop {
        extend(k, &mut sum);
        sums.push(sum);
        let n = sums.len();
        if n >= 3 {
            let e = (8.0 * sums[n - 1] - 6.0 * sums[n - 2] + sums[n - 3]) / 3.0;
            if let Some(p) = previous {
                if (e - p).abs() < target {
                    return ScaleEnergy {
                        psi: idx,
                        j,
                        partial: sum,
                        extrapolated: e,
                        k_max: k,
                        converged: true,
                    };
                }
            }
            previous = Some(e);
        }
        if k * 2 > k_budget {
            let e = previous.unwrap_or(sum);
            return ScaleEnergy {
                psi: idx,
                j,
                partial: sum,
                extrapolated: e,
                k_max: k,
                converged: false,
            };
        }
        k *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameEnergy {
    pub signal: String,
    pub norm_sqr: f64,
    /// Extrapolated Σ|c|² / ‖f‖².
    pub ratio: f64,
    /// Σ over the computed k only, divided by ‖f‖².
    pub partial_ratio: f64,
    /// |ratio − partial_ratio| plus the relative energy of the edge scales,
    /// a proxy for what lies outside the j range.
    pub tail_estimate: f64,
    pub edge_fraction: f64,
    pub inconclusive: bool,
    pub j_min: i64,
    pub j_max: i64,
    pub scales: Vec<ScaleEnergy>,
}

impl FrameEnergy {
    pub fn within(&self, tol: f64) -> bool {
        !self.inconclusive && (self.ratio - 1.0).abs() <= tol
    }
}

pub fn frame_energy(
    f: &TestSignal,
    family: &WaveletFamily,
    j_min: i64,
    j_max: i64,
    k_budget: i64,
) -> Result<FrameEnergy> {
    if j_min > j_max {
        return Err(Error::Precondition(format!("empty j range {j_min}..={j_max}")));
    }
    let norm = f.norm_sqr();
    let target = K_TAIL_TOLERANCE * norm;
    let cells: Vec<(usize, i64)> = (0..family.psis.len())
        .flat_map(|i| (j_min..=j_max).map(move |j| (i, j)))
        .collect();
    let scales: Vec<ScaleEnergy> = cells
        .par_iter()
        .map(|&(i, j)| scale_energy(f, &family.psis[i], i, family.dilation, j, k_budget, target))
        .collect();
    let total: f64 = scales.iter().map(|s| s.extrapolated).sum();
    let partial: f64 = scales.iter().map(|s| s.partial).sum();
    let edge: f64 = scales
        .iter()
        .filter(|s| s.j == j_min || s.j == j_max)
        .map(|s| s.extrapolated)
        .sum();
    let (ratio, partial_ratio, edge_fraction) = (total / norm, partial / norm, edge / norm);
    Ok(FrameEnergy {
        signal: f.to_string(),
        norm_sqr: norm,
        ratio,
        partial_ratio,
        tail_estimate: (ratio - partial_ratio).abs() + edge_fraction,
        edge_fraction,
        inconclusive: scales.iter().any(|s| !s.converged),
        j_min,
        j_max,
        scales,
    })
}
