//! Scenario files and the run context.

use std::fmt;
use std::path::Path;

use lagrangian_core::Tolerances;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Maslov,
    Hormander,
    Cech,
    Surface,
    Fomenko,
    Suite,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Maslov => "maslov",
            Kind::Hormander => "hormander",
            Kind::Cech => "cech",
            Kind::Surface => "surface",
            Kind::Fomenko => "fomenko",
            Kind::Suite => "suite",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: Kind,
    #[serde(default = "empty_params")]
    pub params: Value,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    /// Acceptance criterion this scenario contributes to, e.g. `"AC4"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    /// Values the result must contain, compared field by field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Map<String, Value>>,
}

fn empty_params() -> Value {
    Value::Object(Map::new())
}

impl Scenario {
    pub fn new(kind: Kind, params: Value) -> Self {
        Self { kind, params, seed: 0, output_path: None, criterion: None, expect: None }
    }

    /// Read either a full scenario or, when `kind` is given and the file has
    /// no `"kind"` key, a bare params object.
    pub fn from_file(path: &Path, kind: Option<Kind>) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::from_json(&text, kind)
    }

    pub fn from_json(text: &str, kind: Option<Kind>) -> Result<Self, String> {
        let value: Value = serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
        let is_scenario = value.get("kind").is_some();
        let scenario = match (is_scenario, kind) {
            (true, _) | (false, None) => {
                serde_json::from_value::<Scenario>(value).map_err(|e| format!("invalid scenario: {e}"))?
            }
            (false, Some(kind)) => Scenario::new(kind, value),
        };
        if let Some(kind) = kind {
            if scenario.kind != kind {
                return Err(format!("scenario kind is {}, expected {kind}", scenario.kind));
            }
        }
        Ok(scenario)
    }
}

/// Flags shared by every scenario in a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub tolerance_scale: f64,
    pub jobs: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { seed: None, tolerance_scale: 1.0, jobs: None }
    }
}

impl RunOptions {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances::default().scaled(self.tolerance_scale)
    }
}

/// What a kind handler sees.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub seed: u64,
    pub tol: Tolerances,
}
