//! Machine-readable reports.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::scenario::Kind;

/// JSON Schema every report validates against.
pub const REPORT_SCHEMA: &str = include_str!("../report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Computation finished and every check passed.
    Passed,
    /// Computation finished but a check failed.
    Failed,
    ValidationError,
    NumericalError,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Passed => 0,
            Status::Failed => 1,
            Status::ValidationError => 2,
            Status::NumericalError => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub name: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    /// Absent only when the scenario file itself could not be read.
    pub kind: Option<Kind>,
    pub params: Value,
    pub seed: u64,
    pub tolerance_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<Map<String, Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    pub inputs: Inputs,
    pub status: Status,
    pub result: Value,
    pub residuals: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    /// The only schedule-dependent part of a report.
    pub timing: Timing,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }

    /// The report as JSON with `timing` removed, for determinism comparisons.
    pub fn without_timing(value: &Value) -> Value {
        let mut v = value.clone();
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        v
    }

    /// One line for the plain-text summary.
    pub fn summary_line(&self) -> String {
        let verdict = match self.status {
            Status::Passed => "PASS",
            Status::Failed => "FAIL",
            Status::ValidationError => "INVALID",
            Status::NumericalError => "ERROR",
        };
        let kind = self.inputs.kind.map_or("?", |k| k.as_str());
        let mut line = format!("{verdict:<7} {:<40} {kind}", self.name);
        if let Some(c) = &self.criterion {
            line.push_str(&format!(" [{c}]"));
        }
        if let Some(e) = &self.error {
            line.push_str(&format!(" {}: {}", e.name, e.message));
        }
        for c in self.checks.iter().filter(|c| !c.passed) {
            line.push_str(&format!(" | {} failed: {}", c.name, c.detail));
        }
        line
    }
}
