use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{dilation_power, SqrtProfile};
use crate::construction::WaveletFamily;
use crate::frametest::quadrature::{common_segments, integrate_sqrt_ends};
use crate::report::{Check, Status, VerificationReport, Witness};

use super::report;

/// Translations tried once supports overlap.
pub const SEMIORTH_K_WINDOW: i64 = 8;
/// Relative dilations scanned when a support reaches 0.
const M_CAP: i64 = 8;
/// Inner products above this are reported as a failure.
const NONZERO_THRESHOLD: f64 = 1e-8;

/// Relative dilations m ≥ 1 at which supp ψ̂ and a^m supp ψ̂′ can meet.
fn m_range(psi: &SqrtProfile, other: &SqrtProfile, a: i64) -> i64 {
    let Some(dist) = other.support().distance_from_zero() else {
        return 0;
    };
    let r = psi.support().radius();
    let mut m = 0;
    while m < M_CAP && dilation_power(a.abs(), m + 1) * &dist < r {
        m += 1;
    }
    m
}

/// ⟨D^m T_k ψ′, ψ⟩ = ½|a|^{−m/2} ∫ e^{−iπk a^{−m} q} ψ̂′(a^{−m} q) ψ̂(q) dq.
fn cross_inner_product(psi: &SqrtProfile, other: &SqrtProfile, a: i64, m: i64, k: i64) -> Complex64 {
    let dilated = other.square().restrict(other.domain()).dilate(&dilation_power(a, -m));
    let own = psi.square().restrict(psi.domain());
    let freq = -std::f64::consts::PI * k as f64 * crate::arith::to_f64(&dilation_power(a, -m));
    let mut total = Complex64::new(0.0, 0.0);
    for seg in common_segments(&[&dilated, &own]) {
        let g = |q: f64| {
            let amp = (seg.eval(0, q).max(0.0) * seg.eval(1, q).max(0.0)).sqrt();
            Complex64::from_polar(amp, freq * q)
        };
        total += integrate_sqrt_ends(&g, seg.lo, seg.hi, 1e-12).value;
    }
    total * 0.5 * (a.unsigned_abs() as f64).powf(-(m as f64) / 2.0)
}

/// Semi-orthogonality of the wavelet spaces W_j. Certified exactly when
/// every supp ψ̂ ∩ a^m supp ψ̂′ (m ≥ 1, both orders) is null; otherwise the
/// cross inner products on the first overlap are computed by quadrature.
pub fn check_semiorthogonal(fam: &WaveletFamily) -> VerificationReport {
    let a = fam.dilation;
    let name = "semi_orthogonal";
    let mut overlap = None;
    'scan: for (i, psi) in fam.psis.iter().enumerate() {
        for (l, other) in fam.psis.iter().enumerate() {
            for m in 1..=m_range(psi, other, a) {
                let meet = psi.support().intersect(&other.support().scale(&dilation_power(a, m)));
                if !meet.measure().is_zero() {
                    overlap = Some((i, l, m, meet));
                    break 'scan;
                }
            }
        }
    }
    let Some((i, l, m, meet)) = overlap else {
        return report(
            name,
            vec![Check::passed(
                name,
                "every support is disjoint from the dilated supports",
            )],
        );
    };
    let values: Vec<(i64, Complex64)> = (-SEMIORTH_K_WINDOW..=SEMIORTH_K_WINDOW)
        .into_par_iter()
        .map(|k| (k, cross_inner_product(&fam.psis[i], &fam.psis[l], a, m, k)))
        .collect();
    let (k, v) = values.iter().copied().fold((0, Complex64::new(0.0, 0.0)), |best, cur| {
        if cur.1.norm() > best.1.norm() {
            cur
        } else {
            best
        }
    });
    let witness = Witness {
        j: Some(m),
        k: Some(k),
        region: Some(meet.clone()),
        ..Witness::default()
    }
    .with_sides(format!("{:.6e}", v.norm()), 0);
    let detail = format!(
        "psi {i} meets a^{m} supp psi {l} on a set of positive measure; max |<D^{m} T_k psi_{l}, psi_{i}>| over |k| <= {SEMIORTH_K_WINDOW} is {:.3e}",
        v.norm()
    );
    let mut check = if v.norm() > NONZERO_THRESHOLD {
        Check::failed(name, witness, detail)
    } else {
        let mut c = Check::new(name).with_detail(detail);
        c.status = Status::Uncertain;
        c.witness = Some(witness);
        c
    };
    check.max_residual = Some(v.norm());
    check.points = values.len();
    report(name, vec![check])
}
