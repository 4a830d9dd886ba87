//! Pass/fail records shared by the self-checks and the command-line front end.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Warn,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Warn => "warn",
            Status::Skipped => "skipped",
        };
        f.write_str(s)
    }
}

/// One named check. `elapsed_ms` is only filled in when timing is requested,
/// so that reports stay byte-identical between runs by default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        status: Status,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            status,
            expected: expected.into(),
            actual: actual.into(),
            tolerance: None,
            elapsed_ms: None,
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Runs `f`, records its wall time and appends the resulting check.
    pub fn timed(&mut self, f: impl FnOnce() -> Check) {
        let start = Instant::now();
        let mut c = f();
        c.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        !self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn strip_timings(&mut self) {
        for c in &mut self.checks {
            c.elapsed_ms = None;
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "[{:>7}] {}", c.status.to_string(), c.name)?;
            match (c.expected.is_empty(), c.actual.is_empty()) {
                (true, true) => {}
                (true, false) => write!(f, "  {}", c.actual)?,
                _ => write!(f, "  expected={} actual={}", c.expected, c.actual)?,
            }
            if let Some(t) = c.tolerance {
                write!(f, " tol={t:e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
