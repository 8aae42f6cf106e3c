//! JSON report structures for experiment runs and the acceptance suite.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub kind: String,
    pub params: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
    /// Measured constants (fit exponents, convolution constants, crossings).
    pub measured: BTreeMap<String, f64>,
    pub outputs: Vec<String>,
    pub wall_ms: u128,
}

impl ExperimentReport {
    pub fn new(kind: &str, params: BTreeMap<String, String>) -> Self {
        ExperimentReport {
            kind: kind.to_string(),
            params,
            checks: Vec::new(),
            measured: BTreeMap::new(),
            outputs: Vec::new(),
            wall_ms: 0,
        }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config_hash: String,
    pub seed: u64,
    pub experiments: Vec<ExperimentReport>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub wall_ms: u128,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{} {:2} {}: {} [{} ms]",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.wall_ms
        )
    }
}
