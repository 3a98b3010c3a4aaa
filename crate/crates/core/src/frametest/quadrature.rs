//! Adaptive Gauss–Kronrod (7/15) quadrature for complex integrands built
//! from piecewise-linear data, with square-root endpoint substitution.

use num_complex::Complex64;

use crate::arith::{to_f64, PiRational, PiecewiseLinear};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let pair = f(c - x) + f(c + x);
        kronrod += pair * WGK[i];
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    ((kronrod * h), ((kronrod - gauss) * h).norm())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive bisection until the Kronrod–Gauss difference meets `tol` on
/// every panel or `max_depth` is reached.
pub fn integrate<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> Quadrature {
    let (value, error) = gk15(f, a, b);
    let mut out = Quadrature {
        value,
        error,
        evaluations: 15,
    };
    if error > tol && max_depth > 0 && b - a > f64::EPSILON * (a.abs() + b.abs()) {
        let m = 0.5 * (a + b);
        let l = integrate(f, a, m, 0.5 * tol, max_depth - 1);
        let r = integrate(f, m, b, 0.5 * tol, max_depth - 1);
        out = Quadrature {
            value: l.value + r.value,
            error: l.error + r.error,
            evaluations: out.evaluations + l.evaluations + r.evaluations,
        };
    }
    out
}

/// ∫_a^b f with q = a + t² on the left half and q = b − t² on the right
/// half, which turns √(q − a) and √(b − q) endpoint behaviour smooth.
pub fn integrate_sqrt_ends<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Quadrature {
    if b <= a {
        return Quadrature {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
        };
    }
    let half = 0.5 * (b - a);
    let w = half.sqrt();
    let left = |t: f64| f(a + t * t) * (2.0 * t);
    let right = |t: f64| f(b - t * t) * (2.0 * t);
    let l = integrate(&left, 0.0, w, 0.5 * tol, 40);
    let r = integrate(&right, 0.0, w, 0.5 * tol, 40);
    Quadrature {
        value: l.value + r.value,
        error: l.error + r.error,
        evaluations: l.evaluations + r.evaluations,
    }
}

/// An interval on which every listed function is a single affine map,
/// given in floating point as (slope, intercept).
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub affines: Vec<(f64, f64)>,
}

impl Segment {
    pub fn eval(&self, i: usize, x: f64) -> f64 {
        let (s, c) = self.affines[i];
        s * x + c
    }
}

/// Common refinement of the functions, restricted to where all of them are
/// nonzero pieces. Computed exactly and converted at the end.
pub fn common_segments(fs: &[&PiecewiseLinear]) -> Vec<Segment> {
    let Some(first) = fs.first() else {
        return Vec::new();
    };
    let mut support = first.support();
    for f in &fs[1..] {
        support = support.intersect(&f.support());
    }
    let mut cuts: Vec<PiRational> = support.breakpoints();
    for f in fs {
        cuts.extend(f.breakpoints().into_iter().filter(|b| support.contains(b)));
    }
    cuts.sort();
    cuts.dedup();
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        if !support.contains(&w[0]) {
            continue;
        }
        let affines = fs
            .iter()
            .map(|f| {
                let (_, right) = f.one_sided_affines(&w[0]);
                (to_f64(&right.slope), to_f64(&right.intercept))
            })
            .collect();
        out.push(Segment {
            lo: w[0].to_f64(),
            hi: w[1].to_f64(),
            affines,
        });
    }
    out
}
