//! Evaluation grids: one midpoint per linear piece plus seeded random
//! rationals, with 0 and every breakpoint left out.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{ceil_i64, dilation_power, floor_i64, int, PiRational, PiecewiseLinear, Rational};

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_RANDOM_POINTS: usize = 97;
/// Prime denominator for random points, so they rarely sit on structure.
const RANDOM_DENOMINATOR: i64 = 10007;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub random_points: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            random_points: DEFAULT_RANDOM_POINTS,
            seed: DEFAULT_SEED,
        }
    }
}

impl GridSpec {
    pub fn with_random_points(mut self, n: usize) -> Self {
        self.random_points = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Breakpoints of each function, of f(·/a) and of f(a·).
pub fn dilated_breakpoints(functions: &[&PiecewiseLinear], a: i64) -> Vec<PiRational> {
    let (up, down) = (dilation_power(a, 1), dilation_power(a, -1));
    let mut out = Vec::new();
    for f in functions {
        for b in f.breakpoints() {
            out.push(b.scale(&up));
            out.push(b.scale(&down));
            out.push(b);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Grid over [lo, hi): midpoints between consecutive cuts (breakpoints
/// inside the range plus the ends) and `random_points` seeded rationals.
/// Sorted ascending; 0 and the cuts themselves are excluded.
pub fn verification_grid(
    breakpoints: &[PiRational],
    lo: &PiRational,
    hi: &PiRational,
    spec: GridSpec,
) -> Vec<PiRational> {
    if lo >= hi {
        return Vec::new();
    }
    let mut cuts: Vec<PiRational> = breakpoints.iter().filter(|b| *b > lo && *b < hi).cloned().collect();
    cuts.push(lo.clone());
    cuts.push(hi.clone());
    if lo < &PiRational::zero() && hi > &PiRational::zero() {
        cuts.push(PiRational::zero());
    }
    cuts.sort();
    cuts.dedup();
    let excluded = |x: &PiRational| x.is_zero() || cuts.binary_search(x).is_ok();

    let mut points: Vec<PiRational> = cuts.windows(2).map(|w| w[0].midpoint(&w[1])).collect();

    let d = int(RANDOM_DENOMINATOR);
    let n_lo = ceil_i64(&(lo.value() * &d));
    let n_hi = floor_i64(&(hi.value() * &d));
    if n_lo < n_hi {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut drawn = 0;
        let mut attempts = 0;
        while drawn < spec.random_points && attempts < 50 * spec.random_points {
            attempts += 1;
            let n = rng.random_range(n_lo..n_hi);
            let x = PiRational::from_rational(Rational::new(n.into(), RANDOM_DENOMINATOR.into()));
            if !excluded(&x) {
                points.push(x);
                drawn += 1;
            }
        }
    }
    points.retain(|x| !excluded(x));
    points.sort();
    points.dedup();
    points
}
