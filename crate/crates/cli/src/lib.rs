//! Scenario runner for the `lagrangian-core` computations.
//!
//! A scenario is a JSON file naming a kind, its params and a seed. Running
//! one produces a [`Report`]; running a directory produces one report per
//! file plus a [`Summary`] keyed by acceptance criterion.

pub mod kinds;
pub mod report;
pub mod scenario;
pub mod suite;

use std::time::Instant;

use serde_json::{Map, Value};

pub use report::{Check, ErrorInfo, Inputs, Report, Status, Timing, REPORT_SCHEMA};
pub use scenario::{Context, Kind, RunOptions, Scenario};
pub use suite::{run_suite, Summary, SummaryRow};

/// Run one scenario. Never panics on bad input; problems end up in the report.
pub fn run_scenario(scenario: &Scenario, name: &str, opts: &RunOptions) -> Report {
    let seed = opts.seed.unwrap_or(scenario.seed);
    let ctx = Context { seed, tol: opts.tolerances() };
    let start = Instant::now();
    let handled = kinds::dispatch(scenario.kind, &scenario.params, &ctx);
    let wall_seconds = start.elapsed().as_secs_f64();

    let mut report = Report {
        name: name.to_string(),
        criterion: scenario.criterion.clone(),
        inputs: Inputs {
            kind: Some(scenario.kind),
            params: scenario.params.clone(),
            seed,
            tolerance_scale: opts.tolerance_scale,
            expect: scenario.expect.clone(),
        },
        status: Status::Passed,
        result: Value::Null,
        residuals: Value::Object(Map::new()),
        checks: Vec::new(),
        error: None,
        timing: Timing { wall_seconds },
    };
    match handled {
        Ok(outcome) => {
            report.result = outcome.result;
            report.residuals = outcome.residuals;
            report.checks = outcome.checks;
            if let Some(expect) = &scenario.expect {
                report.checks.extend(expectation_checks(expect, &report.result));
            }
            if report.checks.iter().any(|c| !c.passed) {
                report.status = Status::Failed;
            }
        }
        Err(f) => {
            report.status = if f.is_validation() { Status::ValidationError } else { Status::NumericalError };
            report.error = Some(ErrorInfo { name: f.name().to_string(), message: f.message() });
        }
    }
    report
}

/// A report for a scenario file that could not be parsed.
pub fn invalid_report(name: &str, kind: Option<Kind>, message: String, opts: &RunOptions) -> Report {
    Report {
        name: name.to_string(),
        criterion: None,
        inputs: Inputs {
            kind,
            params: Value::Null,
            seed: opts.seed.unwrap_or(0),
            tolerance_scale: opts.tolerance_scale,
            expect: None,
        },
        status: Status::ValidationError,
        result: Value::Null,
        residuals: Value::Object(Map::new()),
        checks: Vec::new(),
        error: Some(ErrorInfo { name: "InvalidScenario".into(), message }),
        timing: Timing { wall_seconds: 0.0 },
    }
}

fn expectation_checks<'a>(expect: &'a Map<String, Value>, result: &'a Value) -> impl Iterator<Item = Check> + 'a {
    expect.iter().map(move |(key, want)| {
        let got = result.get(key).unwrap_or(&Value::Null);
        Check::new(format!("expect.{key}"), same_value(got, want), format!("got {got}, expected {want}"))
    })
}

/// JSON equality, with `1` and `1.0` treated as equal.
fn same_value(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => x == y || x.as_f64() == y.as_f64(),
        (Value::Array(x), Value::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| same_value(p, q)),
        _ => a == b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn run(text: &str) -> Report {
        let s = Scenario::from_json(text, None).unwrap();
        run_scenario(&s, "t", &RunOptions::default())
    }

    #[test]
    fn rotating_line_index() {
        let r = run(r#"{"kind":"maslov","params":{"preset":"rotating_line","k":1,"m":64}}"#);
        assert_eq!(r.status, Status::Passed);
        assert_eq!(r.result["index"], json!(1));
    }

    #[test]
    fn r2_quadruple_index() {
        let r = run(r#"{"kind":"hormander","params":{"preset":"r2_quadruple"}}"#);
        assert_eq!(r.status, Status::Passed);
        assert_eq!(r.result["index"], json!(1));
    }

    #[test]
    fn malformed_params_are_validation_errors() {
        for text in [
            r#"{"kind":"maslov","params":{"preset":"rotating_line","k":"one","m":64}}"#,
            r#"{"kind":"maslov","params":{"preset":"rotating_line","k":1}}"#,
            r#"{"kind":"hormander","params":{"preset":"r3"}}"#,
            r#"{"kind":"cech","params":{"mode":"pairing"}}"#,
            r#"{"kind":"surface","params":{"immersion":{"preset":"circle","m":-1}}}"#,
            r#"{"kind":"fomenko","params":[]}"#,
            r#"{"kind":"suite"}"#,
        ] {
            let r = run(text);
            assert_eq!(r.status, Status::ValidationError, "{text}");
            assert_eq!(r.status.exit_code(), 2);
            assert_eq!(r.result, Value::Null);
        }
    }

    #[test]
    fn undersampled_loop_is_numerical_error() {
        let r = run(r#"{"kind":"maslov","params":{"preset":"rotating_line","k":3,"m":4}}"#);
        assert_eq!(r.status, Status::NumericalError);
        assert_eq!(r.error.unwrap().name, "Undersampled");
    }

    #[test]
    fn expectations_are_checked() {
        let r = run(
            r#"{"kind":"maslov","params":{"preset":"rotating_line","k":2,"m":64},"expect":{"index":2,"liftable":true}}"#,
        );
        assert_eq!(r.status, Status::Passed);
        let r = run(r#"{"kind":"maslov","params":{"preset":"rotating_line","k":2,"m":64},"expect":{"index":3}}"#);
        assert_eq!(r.status, Status::Failed);
        assert_eq!(r.status.exit_code(), 1);
    }

    #[test]
    fn seed_override_is_echoed() {
        let s =
            Scenario::from_json(r#"{"kind":"hormander","params":{"preset":"r2_quadruple"},"seed":3}"#, None).unwrap();
        let r = run_scenario(&s, "t", &RunOptions { seed: Some(9), ..Default::default() });
        assert_eq!(r.inputs.seed, 9);
    }

    #[test]
    fn numbers_compare_by_value() {
        assert!(same_value(&json!(1), &json!(1.0)));
        assert!(same_value(&json!([2, 2]), &json!([2.0, 2])));
        assert!(!same_value(&json!(1), &json!(true)));
    }
}
