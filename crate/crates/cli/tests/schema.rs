use lagrangian_cli::{invalid_report, run_scenario, Kind, RunOptions, Scenario, REPORT_SCHEMA};
use serde_json::Value;

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

const SCENARIOS: &[&str] = &[
    r#"{"kind":"maslov","params":{"preset":"rotating_line","k":2,"m":64}}"#,
    r#"{"kind":"maslov","params":{"loop":{"n":1,"samples":[[[1,0],[0,1]],[[0,1],[-1,0]],[[-1,0],[0,-1]],[[1,0],[0,1]]]}}}"#,
    r#"{"kind":"maslov","params":{"random_suite":{"count":3,"m":128}},"criterion":"AC1"}"#,
    r#"{"kind":"maslov","params":{"preset":"rotating_line","k":3,"m":4}}"#,
    r#"{"kind":"maslov","params":{"preset":"circle","m":64},"expect":{"index":0}}"#,
    r#"{"kind":"maslov","params":{"preset":"circle"}}"#,
    r#"{"kind":"hormander","params":{"preset":"r2_quadruple"}}"#,
    r#"{"kind":"hormander","params":{"relations":{"count":3}}}"#,
    r#"{"kind":"cech","params":{"x":{"preset":"horizontal","n":1},"y":{"preset":"circle"}}}"#,
    r#"{"kind":"cech","params":{"mode":"antisymmetry","pairs":2}}"#,
    r#"{"kind":"surface","params":{"immersion":{"preset":"circle","m":64}}}"#,
    r#"{"kind":"surface","params":{"immersion":{"k":1,"n":1,"periodic":[true],"positions":[[1,0,0,1],[0,-1,1,0],[-1,0,0,-1],[0,1,-1,0]]}}}"#,
    r#"{"kind":"fomenko","params":{"immersion":{"preset":"flat_plane","n":2,"m":16}}}"#,
    r#"{"kind":"suite"}"#,
];

#[test]
fn reports_validate() {
    let v = validator();
    let opts = RunOptions::default();
    let mut statuses = std::collections::BTreeSet::new();
    for text in SCENARIOS {
        let s = Scenario::from_json(text, None).unwrap();
        let report = run_scenario(&s, "schema", &opts);
        statuses.insert(format!("{:?}", report.status));
        let value: Value = serde_json::from_str(&report.to_json()).unwrap();
        let errors: Vec<String> = v.iter_errors(&value).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{text}: {errors:?}");
    }
    assert_eq!(statuses.len(), 4, "every status is exercised: {statuses:?}");
    let bad = invalid_report("x", None, "malformed JSON".into(), &opts);
    assert!(v.is_valid(&serde_json::to_value(&bad).unwrap()));
    let bad = invalid_report("x", Some(Kind::Cech), "malformed JSON".into(), &opts);
    assert!(v.is_valid(&serde_json::to_value(&bad).unwrap()));
}

#[test]
fn schema_rejects_malformed_reports() {
    let v = validator();
    let s = Scenario::from_json(SCENARIOS[0], None).unwrap();
    let good: Value = serde_json::to_value(run_scenario(&s, "x", &RunOptions::default())).unwrap();
    assert!(v.is_valid(&good));
    for key in ["inputs", "timing", "status"] {
        let mut broken = good.clone();
        broken.as_object_mut().unwrap().remove(key);
        assert!(!v.is_valid(&broken), "missing {key}");
    }
    let mut broken = good.clone();
    broken["status"] = "fine".into();
    assert!(!v.is_valid(&broken));
    let mut broken = good;
    broken["error"] = serde_json::json!({"name": "X", "message": "y"});
    assert!(!v.is_valid(&broken), "passed reports carry no error");
}
