use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use framesmith::arith::{IntervalSet, PiecewiseLinear};
use framesmith::construction::examples::{journe_set, shannon_set};
use framesmith::construction::SpectralSpec;

use crate::SetSource;

/// Writes to the file, or to stdout when no path is given.
pub fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// A bare sigma array, or {"dilation": a, "sigma": [...]}.
pub fn read_sigma(path: &Path) -> Result<(PiecewiseLinear, Option<i64>)> {
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if value.is_object() {
        let spec: SpectralSpec = serde_json::from_value(value)
            .with_context(|| format!("{}: expected {{\"dilation\", \"sigma\"}}", path.display()))?;
        return Ok((spec.sigma, Some(spec.dilation)));
    }
    let sigma: PiecewiseLinear =
        serde_json::from_value(value).with_context(|| format!("{}: expected a list of pieces", path.display()))?;
    Ok((sigma, None))
}

/// One interval set ([[l, r], ...]) or a list of them.
pub fn read_sets(src: &SetSource) -> Result<Vec<IntervalSet>> {
    match (&src.e, &src.e_example) {
        (Some(path), None) => {
            let text = read(path)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            let nested = value
                .as_array()
                .and_then(|a| a.first())
                .and_then(|x| x.as_array())
                .and_then(|x| x.first())
                .is_some_and(|x| x.is_array());
            if nested {
                serde_json::from_value(value)
                    .with_context(|| format!("{}: expected a list of interval sets", path.display()))
            } else {
                let one: IntervalSet = serde_json::from_value(value)
                    .with_context(|| format!("{}: expected an interval set", path.display()))?;
                Ok(vec![one])
            }
        }
        (None, Some(name)) => match name.as_str() {
            "shannon" => Ok(vec![shannon_set()]),
            "journe" => Ok(vec![journe_set()]),
            other => bail!("unknown set {other:?}, expected shannon or journe"),
        },
        _ => bail!("give exactly one of --E and --E-example"),
    }
}
