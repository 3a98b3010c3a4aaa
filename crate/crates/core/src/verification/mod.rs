//! Checkers for the characterization identities of NTF multiwavelets,
//! scaling/wavelet pairs, wavelet sets and semi-orthogonality.

mod ntf;
mod scaling;
mod semiorth;
mod waveletset;

pub use ntf::{check_ntf_multiwavelet, Mode};
pub use scaling::{check_density, check_scaling_wavelet_pair, check_sufficiency, check_with_decay, exit_index};
pub use semiorth::{check_semiorthogonal, SEMIORTH_K_WINDOW};
pub use waveletset::check_waveletset;

use num_traits::Zero;

use crate::arith::{ceil_i64, precision_bits, IntervalSet, PiRational, PiecewiseLinear, Rational, SqrtProfile};
use crate::grid::{dilated_breakpoints, verification_grid, GridSpec};
use crate::report::{Outcome, VerificationReport};

/// Largest j the decay and orbit scans walk before giving up.
pub const DEFAULT_J_MAX: i64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub grid: GridSpec,
    pub bits: u32,
    pub j_max: i64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            grid: GridSpec::default(),
            bits: precision_bits(),
            j_max: DEFAULT_J_MAX,
        }
    }
}

pub(crate) const EXCLUDED: &str = "xi = 0 and every breakpoint of the involved profiles and their dilates";

/// Grid over the hull of every support and its a-dilate.
pub(crate) fn grid_for(squares: &[&PiecewiseLinear], a: i64, opts: &VerifyOptions) -> Vec<PiRational> {
    let mut hull = IntervalSet::empty();
    for f in squares {
        let s = f.support();
        hull = hull.union(&s).union(&s.dilate(a));
    }
    let Some((lo, hi)) = hull.hull() else {
        return Vec::new();
    };
    verification_grid(&dilated_breakpoints(squares, a), &lo, &hi, opts.grid)
}

pub(crate) fn radius(profiles: &[SqrtProfile]) -> Rational {
    profiles
        .iter()
        .map(|p| p.domain().radius())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Window |s| ≤ ⌈r⌉ + 1: beyond it ξ and ξ + 2s cannot both lie in a support
/// of radius r.
pub(crate) fn s_window(r: &Rational) -> i64 {
    ceil_i64(r) + 1
}

/// Runs `eval` at each grid point in parallel and folds the per-point
/// outcomes, one per check, in grid order.
pub(crate) fn run_checks<F>(names: &[&str], grid: &[PiRational], eval: F) -> Vec<crate::report::Check>
where
    F: Fn(&PiRational) -> Vec<Outcome> + Sync + Send,
{
    use rayon::prelude::*;
    let rows: Vec<Vec<Outcome>> = grid.par_iter().map(eval).collect();
    let mut checks: Vec<crate::report::Check> = names.iter().map(|n| crate::report::Check::new(*n)).collect();
    for row in rows {
        for (c, o) in checks.iter_mut().zip(row) {
            c.record(o);
        }
    }
    checks
}

pub(crate) fn report(suite: &str, checks: Vec<crate::report::Check>) -> VerificationReport {
    let mut r = VerificationReport::new(suite, checks);
    r.excluded = Some(EXCLUDED.to_string());
    r
}
