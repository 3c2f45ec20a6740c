use std::fs;
use std::process::Command;

use serde_json::Value;

fn lagrangian(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lagrangian")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn maslov_rotating_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "line.json", r#"{"kind":"maslov","params":{"preset":"rotating_line","k":1,"m":64}}"#);
    let (code, stdout) = lagrangian(&["maslov", &f]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["result"]["index"], 1);
    assert_eq!(report["status"], "passed");
}

#[test]
fn bare_params_with_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "q.json", r#"{"preset":"r2_quadruple"}"#);
    let out = dir.path().join("q.report.json");
    let (code, stdout) = lagrangian(&["hormander", &f, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("PASS"));
    let report: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report["result"]["index"], 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = write(&dir, "bad.json", r#"{"kind":"maslov","params":{"preset":"spiral","m":64}}"#);
    let (code, stdout) = lagrangian(&["maslov", &malformed]);
    assert_eq!(code, 2);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["error"]["name"], "InvalidParams");
    assert_eq!(report["result"], Value::Null);

    let (code, _) = lagrangian(&["cech", &malformed]);
    assert_eq!(code, 2, "kind mismatch");

    let (code, _) = lagrangian(&["maslov", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code, 2);

    let coarse = write(&dir, "coarse.json", r#"{"kind":"maslov","params":{"preset":"rotating_line","k":3,"m":4}}"#);
    let (code, stdout) = lagrangian(&["maslov", &coarse]);
    assert_eq!(code, 3);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["error"]["name"], "Undersampled");

    let wrong =
        write(&dir, "wrong.json", r#"{"kind":"maslov","params":{"preset":"circle","m":64},"expect":{"index":1}}"#);
    assert_eq!(lagrangian(&["maslov", &wrong]).0, 1);

    assert_eq!(lagrangian(&["maslov", &wrong, "--tolerance-scale", "-1"]).0, 2);
}

#[test]
fn seed_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        &dir,
        "a.json",
        r#"{"kind":"cech","params":{"x":{"preset":"circle"},"y":{"preset":"rotating_line","k":-1}},"seed":1}"#,
    );
    let (code, stdout) = lagrangian(&["cech", &f, "--seed", "17"]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["inputs"]["seed"], 17);
    // s·(ℓ_Y − ℓ_X) = −(−1 − 2)
    assert_eq!(report["result"]["pairing"], 3);
}

#[test]
fn empty_suite() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = lagrangian(&["suite", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("0 passed, 0 failed"));
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("reports/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["scenarios"], serde_json::json!([]));
}

#[test]
fn suite_with_undersampled_loop() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir, "good.json", r#"{"kind":"maslov","params":{"preset":"circle","m":256},"criterion":"AC2"}"#);
    write(
        &dir,
        "coarse.json",
        r#"{"kind":"maslov","params":{"preset":"rotating_line","k":3,"m":4},"criterion":"AC1"}"#,
    );
    let out = dir.path().join("out");
    let (code, stdout) =
        lagrangian(&["suite", dir.path().to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", "2"]);
    assert_ne!(code, 0);
    assert!(stdout.contains("AC1    FAIL"), "{stdout}");
    assert!(stdout.contains("AC2    PASS"), "{stdout}");
    let summary: Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["criteria"]["AC1"], "FAIL");
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("coarse.report.json")).unwrap()).unwrap();
    assert_eq!(report["status"], "numerical_error");
}

#[test]
fn cech_sections_and_cover_shape() {
    let dir = tempfile::tempdir().unwrap();
    let samples: Vec<Value> = (0..128)
        .map(|i| {
            let a = std::f64::consts::PI * i as f64 / 128.0;
            serde_json::json!([[a.cos()], [a.sin()]])
        })
        .collect();
    let scenario = serde_json::json!({
        "kind": "cech",
        "seed": 5,
        "params": {
            "sections": { "X": { "preset": "horizontal", "n": 1 }, "Y": { "n": 1, "samples": samples } },
            "cover": { "m": 8, "overlap_fraction": 0.25 }
        }
    });
    let f = write(&dir, "nested.json", &scenario.to_string());
    let (code, stdout) = lagrangian(&["cech", &f]);
    assert_eq!(code, 0, "{stdout}");
    let report: Value = serde_json::from_str(&stdout).unwrap();
    // Y is the rotating line of index 1 and X is constant
    assert_eq!(report["result"]["pairing"], -1);
    assert_eq!(report["result"]["cocycle"].as_array().unwrap().len(), 8);

    let bad = write(&dir, "bad.json", r#"{"kind":"cech","params":{"sections":{"X":{"preset":"circle"}}}}"#);
    assert_eq!(lagrangian(&["cech", &bad]).0, 2);
}
