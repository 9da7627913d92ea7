use serde::{Deserialize, Serialize};

use crate::formats::SCHEMA_VERSION;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureEntry {
    pub index: String,
    pub detail: String,
}

/// JSON report of a `certify` or `verify` run. Exact values are `"p/q"`
/// strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    /// Command line that reproduces this report.
    pub argv: Vec<String>,
    pub d: usize,
    pub k: usize,
    pub alpha: String,
    pub beta: String,
    pub mode: String,
    pub seed: Option<u64>,
    pub counts: Counts,
    pub min_margin: Option<String>,
    pub passed: bool,
    pub duration_seconds: f64,
    pub failures: Vec<FailureEntry>,
    pub details: serde_json::Value,
}

impl RunReport {
    pub fn new(command: &str, argv: &[String]) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            argv: argv.to_vec(),
            d: 0,
            k: 0,
            alpha: String::new(),
            beta: String::new(),
            mode: String::new(),
            seed: None,
            counts: Counts::default(),
            min_margin: None,
            passed: false,
            duration_seconds: 0.0,
            failures: Vec::new(),
            details: serde_json::Value::Null,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}
