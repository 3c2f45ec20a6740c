//! One handler per scenario kind. Each parses its params completely before
//! computing anything.

mod cech;
mod hormander;
mod maslov;
mod surface;

use lagrangian_core::Error;
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::report::Check;
use crate::scenario::{Context, Kind};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub result: Value,
    pub residuals: Value,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Params do not match the kind's schema.
    Params(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn name(&self) -> &'static str {
        match self {
            Failure::Params(_) => "InvalidParams",
            Failure::Core(e) => e.name(),
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Params(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }

    /// Input problems found by the core count as validation errors.
    pub fn is_validation(&self) -> bool {
        matches!(self, Failure::Params(_) | Failure::Core(Error::InvalidInput(_) | Error::DimensionMismatch(_)))
    }
}

pub type Handled = std::result::Result<Outcome, Failure>;

pub fn dispatch(kind: Kind, params: &Value, ctx: &Context) -> Handled {
    match kind {
        Kind::Maslov => maslov::run(params, ctx),
        Kind::Hormander => hormander::run(params, ctx),
        Kind::Cech => cech::run(params, ctx),
        Kind::Surface => surface::run(params, ctx),
        Kind::Fomenko => surface::run_fomenko(params, ctx),
        Kind::Suite => Err(Failure::Params("suite scenarios are run by the suite runner".into())),
    }
}

pub(crate) fn parse<T: DeserializeOwned>(value: Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(value).map_err(|e| Failure::Params(format!("{what}: {e}")))
}

pub(crate) fn object(params: &Value) -> Result<Map<String, Value>, Failure> {
    params.as_object().cloned().ok_or_else(|| Failure::Params("params must be a JSON object".into()))
}

/// Remove a `usize` field from a params object.
pub(crate) fn take_usize(obj: &mut Map<String, Value>, key: &str) -> Result<Option<usize>, Failure> {
    match obj.remove(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| Failure::Params(format!("`{key}` must be a non-negative integer"))),
    }
}

pub(crate) fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("plain data serializes")
}
