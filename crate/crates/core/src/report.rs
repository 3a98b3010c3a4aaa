//! Verdicts shared by every checker.

use serde::{Deserialize, Serialize};

use crate::arith::{IntervalSet, PiRational, RootSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Uncertain,
    Fail,
}

impl Status {
    /// The worse of two verdicts; a failure dominates an uncertainty.
    pub fn and(self, other: Status) -> Status {
        self.max(other)
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Uncertain => 2,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<PiRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<IntervalSet>,
}

impl Witness {
    pub fn at(xi: &PiRational) -> Self {
        Witness {
            xi: Some(xi.clone()),
            ..Default::default()
        }
    }

    pub fn with_s(mut self, s: i64) -> Self {
        self.s = Some(s);
        self
    }

    pub fn with_j(mut self, j: i64) -> Self {
        self.j = Some(j);
        self
    }

    pub fn with_sides(mut self, lhs: impl ToString, rhs: impl ToString) -> Self {
        self.lhs = Some(lhs.to_string());
        self.rhs = Some(rhs.to_string());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Exact bound on what the evaluated truncation leaves out.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<String>,
    /// Upper bound on the largest |lhs − rhs| seen.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            witness: None,
            tail_bound: None,
            max_residual: None,
            points: 0,
            detail: None,
        }
    }

    pub fn passed(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(name).with_detail(detail)
    }

    pub fn failed(name: impl Into<String>, witness: Witness, detail: impl Into<String>) -> Self {
        let mut c = Check::new(name).with_detail(detail);
        c.status = Status::Fail;
        c.witness = Some(witness);
        c
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Folds one evaluated point into the check. The first non-passing point
    /// in evaluation order supplies the witness; a failure replaces an
    /// earlier uncertain witness.
    pub fn record(&mut self, outcome: Outcome) {
        self.points += 1;
        if let Some(r) = outcome.residual {
            let cur = self.max_residual.unwrap_or(0.0);
            self.max_residual = Some(cur.max(r));
        }
        if outcome.status > self.status {
            self.status = outcome.status;
            self.witness = outcome.witness;
        }
    }
}

/// Result of comparing two sides at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub residual: Option<f64>,
    pub witness: Option<Witness>,
}

impl Outcome {
    pub fn pass() -> Self {
        Outcome {
            status: Status::Pass,
            residual: Some(0.0),
            witness: None,
        }
    }

    /// Exact comparison: an identically vanishing difference passes; a
    /// nonzero difference fails once its enclosure at `bits` excludes 0 and
    /// is otherwise reported as uncertain.
    pub fn exact(lhs: &RootSum, rhs: &RootSum, bits: u32, witness: impl FnOnce() -> Witness) -> Self {
        let diff = lhs.sub(rhs);
        if diff.is_zero() {
            return Outcome::pass();
        }
        let enc = diff.enclosure(bits);
        let status = if enc.contains_zero() {
            Status::Uncertain
        } else {
            Status::Fail
        };
        Outcome {
            status,
            residual: Some(enc.modulus_bound()),
            witness: Some(witness().with_sides(lhs, rhs)),
        }
    }

    /// Tolerance comparison: passes when |lhs − rhs| < tol is certain, fails
    /// when |lhs − rhs| ≥ tol is certain.
    pub fn within(lhs: &RootSum, rhs: &RootSum, tol: f64, bits: u32, witness: impl FnOnce() -> Witness) -> Self {
        let diff = lhs.sub(rhs);
        if diff.is_zero() {
            return Outcome::pass();
        }
        let enc = diff.enclosure(bits);
        let upper = enc.modulus_bound();
        let status = if upper < tol {
            Status::Pass
        } else if enc.modulus_lower_bound() >= tol {
            Status::Fail
        } else {
            Status::Uncertain
        };
        Outcome {
            status,
            residual: Some(upper),
            witness: (status != Status::Pass).then(|| witness().with_sides(lhs, rhs)),
        }
    }

    /// The first of two outcomes unless the second is strictly worse.
    pub fn keep_worse(self, other: Outcome) -> Outcome {
        if other.status > self.status {
            other
        } else {
            self
        }
    }

    /// Floating-point comparison for numeric mode.
    pub fn numeric(lhs: f64, rhs: f64, tol: f64, witness: impl FnOnce() -> Witness) -> Self {
        let r = (lhs - rhs).abs();
        let status = if r <= tol { Status::Pass } else { Status::Fail };
        Outcome {
            status,
            residual: Some(r),
            witness: (status == Status::Fail).then(|| witness().with_sides(lhs, rhs)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub status: Status,
    pub checks: Vec<Check>,
    /// Points left out of every grid (0 and breakpoints).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excluded: Option<String>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, checks: Vec<Check>) -> Self {
        let status = checks.iter().fold(Status::Pass, |s, c| s.and(c.status));
        VerificationReport {
            suite: suite.into(),
            status,
            checks,
            excluded: None,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// Combines several reports into one suite, keeping check order.
    pub fn merge(suite: impl Into<String>, reports: impl IntoIterator<Item = VerificationReport>) -> Self {
        let mut checks = Vec::new();
        let mut excluded = None;
        for r in reports {
            for mut c in r.checks {
                c.name = format!("{}.{}", r.suite, c.name);
                checks.push(c);
            }
            excluded = excluded.or(r.excluded);
        }
        let mut out = VerificationReport::new(suite, checks);
        out.excluded = excluded;
        out
    }
}
