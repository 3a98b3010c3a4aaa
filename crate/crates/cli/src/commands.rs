use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use framesmith::arith::{format_rational, parse_rational, precision_bits, IntervalSet, PiRational, Rational};
use framesmith::construction::{
    admissibility_check, classify_waveletset_seed, waveletset_sigma, Example, PartitionRule, SpectralSpec,
};
use framesmith::family_file::FamilyFile;
use framesmith::frametest::{frame_energy, TestSignal};
use framesmith::grid::{dilated_breakpoints, verification_grid, GridSpec};
use framesmith::report::{Status, VerificationReport};
use framesmith::trace::{dimension_function, restricted_trace, spectral_function, Sequence};
use framesmith::verification::{self, Mode, VerifyOptions};
use framesmith::Error;
use serde_json::json;

use crate::io::{emit, read_sets, read_sigma, to_json};
use crate::{
    CheckArgs, CheckWaveletsetArgs, Cli, Command, ConstructArgs, FrameTestArgs, SampleArgs, TraceArgs, WaveletsetArgs,
};

const DEFAULT_DILATION: i64 = 2;

pub fn run(cli: Cli) -> Result<u8> {
    let seed = cli.seed;
    match cli.command {
        Command::Construct(args) => construct(args),
        Command::Check(args) => check(args, seed),
        Command::CheckWaveletset(args) => check_waveletset(args),
        Command::Waveletset(args) => waveletset(args),
        Command::Trace(args) => trace(args, seed),
        Command::FrameTest(args) => frame_test(args),
        Command::Sample(args) => sample(args),
    }
}

fn exit(status: Status) -> u8 {
    status.exit_code() as u8
}

fn construct(args: ConstructArgs) -> Result<u8> {
    let rule: PartitionRule = args.partition.parse()?;
    let (spec, source) = match (&args.source.sigma, &args.source.example) {
        (Some(path), _) => {
            let (sigma, file_a) = read_sigma(path)?;
            let a = match (args.a, file_a) {
                (Some(x), Some(y)) if x != y => bail!("--a {x} disagrees with dilation {y} in {}", path.display()),
                (x, y) => x.or(y).unwrap_or(DEFAULT_DILATION),
            };
            (SpectralSpec::new(sigma, a)?, path.display().to_string())
        }
        (None, Some(name)) => {
            let ex: Example = name.parse()?;
            (ex.spec(args.a.unwrap_or(DEFAULT_DILATION))?, name.clone())
        }
        (None, None) => bail!("give --sigma or --example"),
    };
    let admissibility = admissibility_check(&spec);
    if !admissibility.passed() {
        eprint!("{}", to_json(&admissibility)?);
        if !args.force {
            let failed = admissibility.first_failure().expect("a condition failed");
            eprintln!(
                "sigma is not admissible ({:?}); use --force to build anyway",
                failed.condition
            );
            return Ok(exit(Status::Fail));
        }
    }
    let family = FamilyFile::construct(&spec, rule, source)?;
    emit(&args.out, &family.to_json())?;
    Ok(0)
}

fn load(path: &std::path::Path) -> Result<FamilyFile> {
    FamilyFile::load(path).with_context(|| format!("loading family {}", path.display()))
}

/// Runs the named suites on a loaded family.
pub fn run_suites(
    family: &FamilyFile,
    suites: &[&str],
    mode: Mode,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let (phi, psi) = (family.scaling(), family.wavelets());
    let mut reports = Vec::with_capacity(suites.len());
    for s in suites {
        reports.push(match *s {
            "ntf" => verification::check_ntf_multiwavelet(&psi, mode, opts),
            "scaling-pair" => verification::check_scaling_wavelet_pair(&phi, &psi, opts),
            "scaling-decay" => verification::check_with_decay(&phi, &psi, opts),
            "sufficiency" => verification::check_sufficiency(&phi, &psi, opts),
            "density" => verification::check_density(&phi, opts),
            "semiorth" => verification::check_semiorthogonal(&psi),
            other => bail!(
                "unknown suite {other:?}; expected ntf, scaling-pair, scaling-decay, sufficiency, density or semiorth"
            ),
        });
    }
    Ok(VerificationReport::merge("check", reports))
}

fn check(args: CheckArgs, seed: u64) -> Result<u8> {
    let family = load(&args.family)?;
    let mode: Mode = args.mode.parse()?;
    let opts = VerifyOptions {
        grid: GridSpec::default().with_seed(seed).with_random_points(args.grid_points),
        bits: precision_bits(),
        ..VerifyOptions::default()
    };
    let suites: Vec<&str> = args.suite.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if suites.is_empty() {
        bail!("--suite is empty");
    }
    let report = run_suites(&family, &suites, mode, &opts)?;
    emit(&args.out, &to_json(&report)?)?;
    Ok(exit(report.status))
}

fn check_waveletset(args: CheckWaveletsetArgs) -> Result<u8> {
    let sets = read_sets(&args.sets)?;
    framesmith::construction::check_dilation(args.a)?;
    let window = parse_rational(&args.window)?;
    if window <= Rational::from_integer(0.into()) {
        bail!("--window must be positive");
    }
    let report = verification::check_waveletset(&sets, args.a, &window, args.j_range);
    emit(&args.out, &to_json(&report)?)?;
    Ok(exit(report.status))
}

fn waveletset(args: WaveletsetArgs) -> Result<u8> {
    let sets = read_sets(&args.sets)?;
    let e = sets.iter().fold(IntervalSet::empty(), |acc, s| acc.union(s));
    match waveletset_sigma(&e, args.a, args.budget) {
        Ok(closure) => {
            let mut out = json!({
                "seed": e,
                "dilation": args.a,
                "closure": closure.set,
                "iterations": closure.iterations,
                "sigma": closure.sigma(),
            });
            let mut code = 0;
            if args.classify {
                let class = classify_waveletset_seed(&closure.set, args.a);
                if matches!(class.class, framesmith::construction::SeedClass::NotAdmissible { .. }) {
                    code = exit(Status::Fail);
                }
                out["classification"] = serde_json::to_value(class)?;
            }
            emit(&args.out, &to_json(&out)?)?;
            Ok(code)
        }
        Err(Error::NonTerminating { budget, partial }) => {
            let out = json!({
                "seed": e,
                "dilation": args.a,
                "status": "non_terminating",
                "budget": budget,
                "partial": partial,
            });
            emit(&args.out, &to_json(&out)?)?;
            eprintln!("the union did not stabilize within {budget} iterations (non-terminating near 0)");
            Ok(exit(Status::Fail))
        }
        Err(e) => Err(e.into()),
    }
}

fn trace(args: TraceArgs, seed: u64) -> Result<u8> {
    let family = load(&args.family)?;
    let f: Sequence = args.f.parse()?;
    let phis = family.scaling().profiles();
    let spec = match args.grid.as_str() {
        "auto" => GridSpec::default().with_seed(seed),
        n => GridSpec::default().with_seed(seed).with_random_points(
            n.parse()
                .map_err(|_| anyhow!("--grid must be auto or a count, got {n:?}"))?,
        ),
    };
    let squares: Vec<_> = phis.iter().map(|p| p.square()).collect();
    let grid = verification_grid(
        &dilated_breakpoints(&squares, family.dilation),
        &PiRational::integer(-1),
        &PiRational::integer(1),
        spec,
    );
    let bits = precision_bits();
    let mut csv = String::from("xi,xi_float,spectral,dim,tau_f,tau_f_exact\n");
    for xi in &grid {
        let tau = restricted_trace(&phis, &f, xi);
        let exact = tau.as_rational().map(|r| format_rational(&r)).unwrap_or_default();
        writeln!(
            csv,
            "{},{:e},{},{},{:e},{}",
            xi,
            xi.to_f64(),
            format_rational(&spectral_function(&phis, xi)),
            format_rational(&dimension_function(&phis, xi)),
            tau.enclosure(bits).re.midpoint_f64(),
            exact
        )?;
    }
    emit(&args.out, &csv)?;
    Ok(0)
}

fn frame_test(args: FrameTestArgs) -> Result<u8> {
    let family = load(&args.family)?;
    let psi = family.wavelets();
    let mut results = Vec::with_capacity(args.signal.len());
    let mut status = Status::Pass;
    for s in &args.signal {
        let signal: TestSignal = s.parse()?;
        let e = frame_energy(&signal, &psi, args.jmin, args.jmax, args.k_budget)?;
        let verdict = if e.inconclusive {
            Status::Uncertain
        } else if (e.ratio - 1.0).abs() <= args.tol {
            Status::Pass
        } else {
            Status::Fail
        };
        status = status.and(verdict);
        results.push(json!({
            "signal": e.signal,
            "status": verdict,
            "ratio": e.ratio,
            "partial_ratio": e.partial_ratio,
            "tail_estimate": e.tail_estimate,
            "edge_fraction": e.edge_fraction,
            "inconclusive": e.inconclusive,
            "norm_sqr": e.norm_sqr,
        }));
    }
    let out = json!({
        "status": status,
        "tol": args.tol,
        "j_min": args.jmin,
        "j_max": args.jmax,
        "results": results,
    });
    emit(&args.out, &to_json(&out)?)?;
    Ok(exit(status))
}

fn sample(args: SampleArgs) -> Result<u8> {
    let family = load(&args.family)?;
    if args.grid == 0 {
        bail!("--grid must be positive");
    }
    let mut hull = family.sigma.support();
    for p in &family.psis {
        hull = hull.union(p.domain());
    }
    let (lo, hi) = hull.hull().unwrap_or((PiRational::integer(-1), PiRational::integer(1)));
    let n = args.grid as i64;
    let width = hi.value() - lo.value();
    let mut csv = String::from("xi");
    for i in 0..family.psis.len() {
        write!(csv, ",psi_hat_{}", i + 1)?;
    }
    csv.push_str(",sigma\n");
    for i in 0..n {
        let offset = &width * Rational::new((2 * i + 1).into(), (2 * n).into());
        let xi = PiRational::from_rational(lo.value() + offset);
        write!(csv, "{:e}", xi.to_f64())?;
        for p in &family.psis {
            write!(csv, ",{:e}", p.value_f64(&xi))?;
        }
        writeln!(csv, ",{:e}", framesmith::arith::to_f64(&family.sigma.eval(&xi)))?;
    }
    emit(&args.out, &csv)?;
    Ok(0)
}
