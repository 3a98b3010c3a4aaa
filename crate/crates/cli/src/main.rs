//! `framesmith`: construct NTF multiwavelets from piecewise-linear spectral
//! functions, check them, and export traces and samples.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit status for errors (bad input, failed invariants, I/O). Verdicts use
/// 0 (pass), 1 (fail) and 2 (uncertain).
const ERROR_EXIT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "framesmith", version, about, long_about = None)]
#[command(
    after_help = "Frequencies are written in units of pi: the interval [-1,1) means [-pi,pi).\n\
Exit status: 0 pass, 1 fail, 2 uncertain, 3 error.\n\
FRAMESMITH_PRECISION sets the enclosure precision in bits (default 64)."
)]
struct Cli {
    /// Seed for the random grid points.
    #[arg(long, global = true, default_value_t = framesmith::grid::DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build scaling and wavelet profiles from a spectral function.
    Construct(ConstructArgs),
    /// Run verification suites on a family file.
    Check(CheckArgs),
    /// Check that sets E_i form a multiwavelet set.
    CheckWaveletset(CheckWaveletsetArgs),
    /// Close a wavelet-set seed under contraction, optionally classifying it.
    Waveletset(WaveletsetArgs),
    /// Tabulate spectral, dimension and restricted trace functions.
    Trace(TraceArgs),
    /// Numerical frame-energy test with test signals.
    FrameTest(FrameTestArgs),
    /// Tabulate |psi_hat_i| and sigma on a uniform grid for plotting.
    Sample(SampleArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SigmaSource {
    /// JSON file with a piecewise-linear sigma, or an object {"dilation", "sigma"}.
    #[arg(long)]
    sigma: Option<PathBuf>,
    /// Built-in sigma: shannon, tent, journe or pwl:a=P,b=Q.
    #[arg(long)]
    example: Option<String>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(flatten)]
    source: SigmaSource,
    /// Dilation factor, |a| >= 2.
    #[arg(long = "a", allow_negative_numbers = true)]
    a: Option<i64>,
    /// layered (fewest profiles) or windows (one per [2k-1, 2k+1)).
    #[arg(long, default_value = "layered")]
    partition: String,
    /// Build even when sigma fails the admissibility conditions.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    family: PathBuf,
    /// Comma-separated: ntf, scaling-pair, scaling-decay, sufficiency, density, semiorth.
    #[arg(long, default_value = "ntf")]
    suite: String,
    /// exact or numeric (numeric applies to the ntf suite).
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Random grid points added to the breakpoint midpoints.
    #[arg(long, default_value_t = framesmith::grid::DEFAULT_RANDOM_POINTS)]
    grid_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SetSource {
    /// JSON file holding one interval set or a list of them.
    #[arg(long = "E")]
    e: Option<PathBuf>,
    /// Built-in set: shannon or journe.
    #[arg(long = "E-example")]
    e_example: Option<String>,
}

#[derive(Args, Debug)]
struct CheckWaveletsetArgs {
    #[command(flatten)]
    sets: SetSource,
    #[arg(long = "a", default_value_t = 2, allow_negative_numbers = true)]
    a: i64,
    /// Half-width W of the tested window, in units of pi.
    #[arg(long, default_value = "64")]
    window: String,
    /// The window excludes (-eps, eps) with eps = W |a|^(-j_range).
    #[arg(long, default_value_t = 24)]
    j_range: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WaveletsetArgs {
    #[command(flatten)]
    sets: SetSource,
    #[arg(long = "a", default_value_t = 2, allow_negative_numbers = true)]
    a: i64,
    /// Also classify the seed as not admissible, ntf or orthonormal.
    #[arg(long)]
    classify: bool,
    /// Iterations allowed for the union to stabilize.
    #[arg(long, default_value_t = framesmith::construction::DEFAULT_FIXPOINT_BUDGET)]
    budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[arg(long)]
    family: PathBuf,
    /// Finitely supported sequence, e.g. "1@0,1/2@1,i@-2".
    #[arg(long, default_value = "1@0")]
    f: String,
    /// auto (breakpoint midpoints and random points) or a number of random points.
    #[arg(long, default_value = "auto")]
    grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FrameTestArgs {
    #[arg(long)]
    family: PathBuf,
    /// Test signal, e.g. "tent:[-1,1)" or "box:[1,2)"; repeatable.
    #[arg(long, required = true)]
    signal: Vec<String>,
    #[arg(long, default_value_t = -8, allow_negative_numbers = true)]
    jmin: i64,
    #[arg(long, default_value_t = 8, allow_negative_numbers = true)]
    jmax: i64,
    /// Allowed |ratio - 1|.
    #[arg(long, default_value_t = 3e-3)]
    tol: f64,
    /// Largest translation window K tried per scale.
    #[arg(long, default_value_t = framesmith::frametest::DEFAULT_K_BUDGET)]
    k_budget: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    family: PathBuf,
    /// Number of rows.
    #[arg(long, default_value_t = 1024)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ERROR_EXIT } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR_EXIT)
        }
    }
}
