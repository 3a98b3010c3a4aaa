//! Fiberization calculus for shift-invariant spaces given by generators with
//! bounded Fourier support: restricted and operator traces, spectral and
//! dimension functions, coset operators and the dilation formula.
//!
//! A generator set Φ is a slice of [`SqrtProfile`]s read as φ̂. Every trace
//! value is a finite sum of Gaussian rationals times square roots of
//! rationals and is returned exactly as a [`RootSum`].

pub mod sequence;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arith::{ceil_i64, format_rational, int, rat, real, Gaussian, PiRational, Rational, RootSum, SqrtProfile};
use crate::error::{Error, Result};
use crate::report::{Check, Outcome, Witness};

pub use sequence::{coset_op, coset_op_adj, Sequence};

/// T_per φ(ξ) = (φ̂(ξ + 2k))_k, stored as the radicands φ̂(ξ + 2k)².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub entries: Vec<(i64, Rational)>,
}

impl Fiber {
    pub fn value(&self, k: i64) -> RootSum {
        self.entries
            .iter()
            .find(|(i, _)| *i == k)
            .map_or_else(RootSum::zero, |(_, r)| RootSum::sqrt(r.clone()))
    }

    /// ⟨f | T_per φ(ξ)⟩; the fiber is real, so no conjugation is needed.
    pub fn pair(&self, f: &Sequence) -> RootSum {
        let mut out = RootSum::zero();
        for (k, r) in &self.entries {
            let c = f.get(*k);
            if !c.is_zero() {
                out.add_term(c, r.clone());
            }
        }
        out
    }

    /// Σ_k |φ̂(ξ + 2k)|².
    pub fn norm_sqr(&self) -> Rational {
        self.entries.iter().fold(Rational::zero(), |acc, (_, r)| acc + r)
    }
}

/// Indices k with ξ + 2k in the support hull of φ̂.
fn fiber_range(phi: &SqrtProfile, xi: &PiRational) -> Option<(i64, i64)> {
    let (lo, hi) = phi.domain().hull()?;
    let k_lo = ceil_i64(&((lo.value() - xi.value()) / int(2)));
    let k_hi = ceil_i64(&((hi.value() - xi.value()) / int(2))) - 1;
    (k_lo <= k_hi).then_some((k_lo, k_hi))
}

pub fn fiber(phi: &SqrtProfile, xi: &PiRational) -> Fiber {
    let mut entries = Vec::new();
    if let Some((k_lo, k_hi)) = fiber_range(phi, xi) {
        for k in k_lo..=k_hi {
            let r = phi.square_at(&xi.shift_periods(k));
            if !r.is_zero() {
                entries.push((k, r));
            }
        }
    }
    Fiber { entries }
}

/// τ_{V,f}(ξ) = Σ_φ |⟨f | T_per φ(ξ)⟩|².
pub fn restricted_trace(phis: &[SqrtProfile], f: &Sequence, xi: &PiRational) -> RootSum {
    phis.iter()
        .fold(RootSum::zero(), |acc, phi| acc.add(&fiber(phi, xi).pair(f).norm_sqr()))
}

/// σ_V(ξ) = τ_{V,δ_0}(ξ) = Σ_φ |φ̂(ξ)|².
pub fn spectral_function(phis: &[SqrtProfile], xi: &PiRational) -> Rational {
    phis.iter().fold(Rational::zero(), |acc, phi| acc + phi.square_at(xi))
}

/// dim_V(ξ) = Σ_φ ‖T_per φ(ξ)‖².
pub fn dimension_function(phis: &[SqrtProfile], xi: &PiRational) -> Rational {
    phis.iter()
        .fold(Rational::zero(), |acc, phi| acc + fiber(phi, xi).norm_sqr())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Padding {
    Zero,
    Identity,
}

/// A positive semidefinite operator on ℓ²(ℤ) that is a finite Hermitian
/// matrix on the indices `first..first + n` and zero or the identity
/// elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowOperator {
    first: i64,
    matrix: Vec<Vec<Gaussian>>,
    padding: Padding,
}

impl WindowOperator {
    /// Validates that the matrix is square, Hermitian and positive
    /// semidefinite. A failed PSD test returns a witness x with ⟨Tx, x⟩ < 0.
    pub fn new(first: i64, matrix: Vec<Vec<Gaussian>>, padding: Padding) -> Result<Self> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation(
                    "operator matrix is square",
                    format!("row {i} has {} entries, expected {n}", row.len()),
                ));
            }
            for (j, v) in row.iter().enumerate() {
                if *v != matrix[j][i].conj() {
                    return Err(Error::validation(
                        "operator matrix is Hermitian",
                        format!("entry ({i}, {j}) is not the conjugate of ({j}, {i})"),
                    ));
                }
            }
        }
        if let Some(x) = negative_direction(&matrix) {
            let value = quadratic_form(&matrix, &x);
            return Err(Error::NotPositive {
                witness: x.iter().map(format_gaussian).collect(),
                value: format_rational(&value),
            });
        }
        Ok(WindowOperator { first, matrix, padding })
    }

    pub fn identity(first: i64, n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| real(if i == j { int(1) } else { int(0) })).collect())
            .collect();
        WindowOperator {
            first,
            matrix,
            padding: Padding::Zero,
        }
    }

    pub fn zero() -> Self {
        WindowOperator {
            first: 0,
            matrix: Vec::new(),
            padding: Padding::Zero,
        }
    }

    fn index(&self, k: i64) -> Option<usize> {
        let i = k - self.first;
        (0..self.matrix.len() as i64).contains(&i).then_some(i as usize)
    }

    /// ⟨T v, v⟩ for a real fiber v.
    fn form_on(&self, fiber: &Fiber) -> RootSum {
        let mut out = RootSum::zero();
        for (k, rk) in &fiber.entries {
            match self.index(*k) {
                Some(i) => {
                    for (l, rl) in &fiber.entries {
                        if let Some(j) = self.index(*l) {
                            let t = &self.matrix[i][j];
                            if !t.is_zero() {
                                out.add_term(t.clone(), rk * rl);
                            }
                        }
                    }
                }
                None if self.padding == Padding::Identity => out.add_term(real(int(1)), rk * rk),
                None => {}
            }
        }
        out
    }
}

fn format_gaussian(g: &Gaussian) -> String {
    if g.im.is_zero() {
        format_rational(&g.re)
    } else {
        format!(
            "{}{}{}i",
            format_rational(&g.re),
            if g.im.is_negative() { "" } else { "+" },
            format_rational(&g.im)
        )
    }
}

/// x* M x, real for Hermitian M.
fn quadratic_form(m: &[Vec<Gaussian>], x: &[Gaussian]) -> Rational {
    let mut acc = Gaussian::zero();
    for (i, xi) in x.iter().enumerate() {
        for (j, xj) in x.iter().enumerate() {
            acc += xi.conj() * &m[i][j] * xj;
        }
    }
    acc.re
}

/// Exact symmetric elimination with basis tracking. Returns a vector x with
/// x* M x < 0 when M is not positive semidefinite.
fn negative_direction(m: &[Vec<Gaussian>]) -> Option<Vec<Gaussian>> {
    let n = m.len();
    // b[j] is the original-coordinate vector whose M-Gram entries form the
    // current Schur complement: s[i][j] = b[i]* M b[j].
    let mut s: Vec<Vec<Gaussian>> = m.to_vec();
    let mut b: Vec<Vec<Gaussian>> = (0..n)
        .map(|i| (0..n).map(|j| real(if i == j { int(1) } else { int(0) })).collect())
        .collect();
    let mut alive: Vec<usize> = (0..n).collect();
    while let Some(pos) = alive.first().copied() {
        let k = pos;
        alive.remove(0);
        let pivot = s[k][k].re.clone();
        if pivot.is_negative() {
            return Some(b[k].clone());
        }
        if pivot.is_zero() {
            if let Some(&j) = alive.iter().find(|&&j| !s[k][j].is_zero()) {
                // y = b_j + t·b_k with t chosen so that y* M y < 0
                let skj = s[k][j].clone();
                let t = skj.scale(-(s[j][j].re.abs() + int(1))) / real(skj.norm_sqr());
                return Some(b[j].iter().zip(&b[k]).map(|(x, y)| x + &t * y).collect());
            }
            continue;
        }
        for &j in &alive {
            let f = &s[k][j] / real(pivot.clone());
            let bk = b[k].clone();
            for (x, y) in b[j].iter_mut().zip(&bk) {
                *x -= &f * y;
            }
        }
        let sk: Vec<Gaussian> = s[k].clone();
        for &i in &alive {
            for &j in &alive {
                let delta = sk[i].conj() * &sk[j] / real(pivot.clone());
                s[i][j] -= delta;
            }
        }
    }
    None
}

/// τ_{V,T}(ξ) = Σ_φ ⟨T T_per φ(ξ) | T_per φ(ξ)⟩.
pub fn operator_trace(phis: &[SqrtProfile], t: &WindowOperator, xi: &PiRational) -> RootSum {
    phis.iter()
        .fold(RootSum::zero(), |acc, phi| acc.add(&t.form_on(&fiber(phi, xi))))
}

/// τ_{D_a V, f}(ξ), using {D_a T_d φ : 0 ≤ d < |a|} as generator set of
/// D_a V. Averaging over d leaves Σ_φ Σ_ρ |Σ_{k ≡ ρ mod a} f_k φ̂((ξ+2k)/a)|².
pub fn dilated_trace(phis: &[SqrtProfile], a: i64, f: &Sequence, xi: &PiRational) -> RootSum {
    let inv = rat(1, a);
    let m = a.abs();
    let mut out = RootSum::zero();
    for phi in phis {
        let mut by_residue: Vec<RootSum> = vec![RootSum::zero(); m as usize];
        for (k, c) in f.iter() {
            let r = phi.square_at(&xi.shift_periods(k).scale(&inv));
            if !r.is_zero() {
                by_residue[k.rem_euclid(m) as usize].add_term(c.clone(), r);
            }
        }
        for s in by_residue {
            out = out.add(&s.norm_sqr());
        }
    }
    out
}

/// Right-hand side of the dilation formula: Σ_d τ_{V, D_d* f}((ξ + 2d)/a).
pub fn dilation_formula_rhs(phis: &[SqrtProfile], a: i64, f: &Sequence, xi: &PiRational) -> RootSum {
    let inv = rat(1, a);
    (0..a.abs()).fold(RootSum::zero(), |acc, d| {
        let g = coset_op_adj(a, d, f);
        if g.is_zero() {
            return acc;
        }
        acc.add(&restricted_trace(phis, &g, &xi.shift_periods(d).scale(&inv)))
    })
}

pub(crate) fn run_grid(name: &str, grid: &[PiRational], eval: impl Fn(&PiRational) -> Outcome + Sync) -> Check {
    let outcomes: Vec<Outcome> = grid.par_iter().map(&eval).collect();
    let mut check = Check::new(name);
    for o in outcomes {
        check.record(o);
    }
    check
}

/// Compares both sides of the dilation formula on a grid.
pub fn dilation_trace_check(
    phis: &[SqrtProfile],
    a: i64,
    f: &Sequence,
    grid: &[PiRational],
    tol: f64,
    bits: u32,
) -> Check {
    run_grid("dilation_formula", grid, |xi| {
        Outcome::within(
            &dilated_trace(phis, a, f, xi),
            &dilation_formula_rhs(phis, a, f, xi),
            tol,
            bits,
            || Witness::at(xi),
        )
    })
}

/// Cross-generator consistency: τ_{V,f} computed from Φ and from a second
/// generator set of the same space agree for f = δ_0 + α δ_l, α ∈ {0, 1, i}
/// and 0 < |l| ≤ l_max.
pub fn ntf_generator_test(
    phis: &[SqrtProfile],
    reference: &[SqrtProfile],
    l_max: i64,
    grid: &[PiRational],
    bits: u32,
) -> Check {
    let alphas = [Gaussian::zero(), real(int(1)), Gaussian::new(int(0), int(1))];
    let mut tests: Vec<(i64, Sequence)> = vec![(0, Sequence::delta(0))];
    for l in (-l_max..=l_max).filter(|l| *l != 0) {
        for alpha in &alphas[1..] {
            tests.push((l, Sequence::delta(0).add(&Sequence::zero().with(l, alpha.clone()))));
        }
    }
    let mut check = run_grid("generator_consistency", grid, |xi| {
        for (l, f) in &tests {
            let o = Outcome::exact(
                &restricted_trace(phis, f, xi),
                &restricted_trace(reference, f, xi),
                bits,
                || Witness::at(xi).with_s(*l),
            );
            if o.status != crate::report::Status::Pass {
                return o;
            }
        }
        Outcome::pass()
    });
    check.detail = Some(format!("{} test sequences per point", tests.len()));
    check
}

/// Σ_{j≥1} Σ_ψ ψ̂(a^j ξ) ψ̂(a^j(ξ + 2s)); the terms vanish once |a^j ξ|
/// leaves the support radius.
pub fn wavelet_series(psis: &[SqrtProfile], a: i64, s: i64, xi: &PiRational, j_max: i64) -> RootSum {
    let radius = psis
        .iter()
        .map(|p| p.domain().radius())
        .max()
        .unwrap_or_else(Rational::zero);
    let mut out = RootSum::zero();
    let mut scale = int(1);
    for _ in 1..=j_max {
        scale *= int(a);
        let x = xi.scale(&scale);
        if x.value().abs() > radius {
            break;
        }
        let y = xi.shift_periods(s).scale(&scale);
        for p in psis {
            let (u, v) = (p.square_at(&x), p.square_at(&y));
            if !u.is_zero() && !v.is_zero() {
                out.add_term(real(int(1)), u * v);
            }
        }
    }
    out
}

/// Σ_φ φ̂(ξ) φ̂(ξ + 2s).
pub fn correlation(profiles: &[SqrtProfile], s: i64, xi: &PiRational) -> RootSum {
    let y = xi.shift_periods(s);
    let mut out = RootSum::zero();
    for p in profiles {
        let (u, v) = (p.square_at(xi), p.square_at(&y));
        if !u.is_zero() && !v.is_zero() {
            out.add_term(real(int(1)), u * v);
        }
    }
    out
}

/// Series identity between the wavelet and scaling correlations, for every
/// s in `s_window` and every grid point.
#[allow(clippy::too_many_arguments)]
pub fn series_identity_check(
    phis: &[SqrtProfile],
    psis: &[SqrtProfile],
    a: i64,
    s_window: std::ops::RangeInclusive<i64>,
    grid: &[PiRational],
    j_max: i64,
    tol: f64,
    bits: u32,
) -> Check {
    let mut check = run_grid("series_identity", grid, |xi| {
        let mut worst = Outcome::pass();
        for s in s_window.clone() {
            let o = Outcome::within(
                &wavelet_series(psis, a, s, xi, j_max),
                &correlation(phis, s, xi),
                tol,
                bits,
                || Witness::at(xi).with_s(s),
            );
            if o.status > worst.status || worst.residual < o.residual && o.status == worst.status {
                worst = o;
            }
        }
        worst
    });
    check.detail = Some(format!("s in {}..={}", s_window.start(), s_window.end()));
    check
}

/// τ_{V_1,f} = τ_{V_0,f} + τ_{W_0,f} where V_1 = D_a V_0, and
/// τ_{V_0,f} ≤ τ_{V_1,f}.
pub fn additivity_and_monotonicity(
    phis: &[SqrtProfile],
    psis: &[SqrtProfile],
    a: i64,
    fs: &[Sequence],
    grid: &[PiRational],
    bits: u32,
) -> (Check, Check) {
    let outcomes: Vec<(Outcome, Outcome)> = grid
        .par_iter()
        .map(|xi| {
            let mut add = Outcome::pass();
            let mut mono = Outcome::pass();
            for (n, f) in fs.iter().enumerate() {
                let v0 = restricted_trace(phis, f, xi);
                let w0 = restricted_trace(psis, f, xi);
                let v1 = dilated_trace(phis, a, f, xi);
                let witness = || {
                    let mut w = Witness::at(xi);
                    w.k = Some(n as i64);
                    w
                };
                let o = Outcome::exact(&v1, &v0.add(&w0), bits, witness);
                if o.status > add.status {
                    add = o;
                }
                // V_1 − V_0 = W_0 and W_0 traces are sums of squares, so
                // monotonicity reduces to the sign of v1 − v0
                let gap = v1.sub(&v0);
                let enc = gap.enclosure(bits);
                let status = if gap.is_zero() || !enc.re.lo.is_negative() {
                    crate::report::Status::Pass
                } else if enc.re.hi.is_negative() {
                    crate::report::Status::Fail
                } else {
                    crate::report::Status::Uncertain
                };
                if status > mono.status {
                    mono = Outcome {
                        status,
                        residual: None,
                        witness: Some(witness().with_sides(&v0, &v1)),
                    };
                }
            }
            (add, mono)
        })
        .collect();
    let mut add = Check::new("trace_additivity");
    let mut mono = Check::new("trace_monotonicity");
    for (x, y) in outcomes {
        add.record(x);
        mono.record(y);
    }
    (add, mono)
}
