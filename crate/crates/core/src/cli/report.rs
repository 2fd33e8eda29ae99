use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::lie_core::ComplexMatrix;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl CheckResult {
    /// Passes iff `residual <= tolerance`; NaN residuals fail.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let verdict = if residual <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            name: name.into(),
            residual,
            tolerance,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Machine-readable outcome of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub checks: Vec<CheckResult>,
    pub artifacts: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    pub seed: u64,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Self {
            command: command.into(),
            inputs: BTreeMap::new(),
            checks: Vec::new(),
            artifacts: BTreeMap::new(),
            warnings: Vec::new(),
            seed,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) {
        self.inputs.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable input"),
        );
    }

    pub fn artifact(&mut self, key: &str, value: impl Serialize) {
        self.artifacts.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable artifact"),
        );
    }

    pub fn matrix(&mut self, key: &str, m: &ComplexMatrix) {
        self.artifacts.insert(key.to_string(), matrix_json(m));
    }

    pub fn check(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(CheckResult::new(name, residual, tolerance));
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report") + "\n"
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// Plain-text table for standard output.
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let mut out = String::new();
        writeln!(out, "{} (seed {})", self.command, self.seed).unwrap();
        writeln!(
            out,
            "{:<7} {:<width$} {:>12} {:>12}",
            "VERDICT", "CHECK", "RESIDUAL", "TOLERANCE"
        )
        .unwrap();
        for c in &self.checks {
            let v = if c.passed() { "pass" } else { "FAIL" };
            writeln!(
                out,
                "{:<7} {:<width$} {:>12.3e} {:>12.3e}",
                v, c.name, c.residual, c.tolerance
            )
            .unwrap();
        }
        for w in &self.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        let failed = self.failures().count();
        writeln!(out, "{} checks, {} failed", self.checks.len(), failed).unwrap();
        out
    }
}

/// `{"re": [[...]], "im": [[...]]}`.
pub fn matrix_json(m: &ComplexMatrix) -> Value {
    let rows = m.rows();
    let re: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
    let im: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|z| z.im).collect()).collect();
    serde_json::json!({ "re": re, "im": im })
}
