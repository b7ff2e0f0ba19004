//! Outcome of a verification run.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::output::{num, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    /// `null` in JSON when the check raised an error.
    pub defect: f64,
    pub tolerance: f64,
    pub detail: String,
    /// Kept out of the JSON file so reruns with the same seed are identical.
    #[serde(skip)]
    pub runtime: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub p: u64,
    pub alpha: f64,
    pub tol: f64,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl RunReport {
    pub fn new(suite: &str, p: u64, alpha: f64, tol: f64, seed: u64) -> Self {
        RunReport {
            suite: suite.to_string(),
            p,
            alpha,
            tol,
            seed,
            passed: true,
            checks: Vec::new(),
        }
    }

    /// Runs `f`, which returns the measured defect and a note; the check
    /// passes when the defect is at most `tolerance`.
    pub fn run(
        &mut self,
        suite: &'static str,
        name: &'static str,
        tolerance: f64,
        f: impl FnOnce() -> CliResult<(f64, String)>,
    ) {
        let start = Instant::now();
        let (defect, detail, passed) = match f() {
            Ok((d, note)) => (d, note, d <= tolerance),
            Err(e) => (f64::NAN, format!("error: {e}"), false),
        };
        self.passed &= passed;
        self.checks.push(CheckResult {
            suite,
            name,
            passed,
            defect,
            tolerance,
            detail,
            runtime: start.elapsed(),
        });
    }

    /// A check that is either satisfied or not.
    pub fn require(
        &mut self,
        suite: &'static str,
        name: &'static str,
        f: impl FnOnce() -> CliResult<(bool, String)>,
    ) {
        self.run(suite, name, 0.0, || {
            f().map(|(ok, note)| (if ok { 0.0 } else { 1.0 }, note))
        });
    }

    /// Human-readable summary, one line per check.
    pub fn table(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{} {:<12} {:<40} defect {:>24}  tol {:>24}  {:>10.3?}  {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                num(c.defect),
                num(c.tolerance),
                c.runtime,
                c.detail
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        s.push_str(&format!(
            "{}: {} checks, {failed} failed\n",
            self.suite,
            self.checks.len()
        ));
        s
    }
}
