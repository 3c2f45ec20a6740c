//! Acceptance criteria AC1–AC11 against the shipped scenario suite.
//!
//! Runs `scenarios/acceptance` twice: once with the default worker count for
//! AC1–AC10, once on a single worker for the determinism comparison (AC11).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use lagrangian_cli::{run_suite, Report, RunOptions};
use serde_json::Value;

/// Wall-clock limits in seconds.
const LIMITS: &[(&str, f64)] = &[("AC1", 10.0), ("AC8", 30.0)];

fn suite_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/acceptance")
}

fn normalized(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let value: Value = serde_json::from_str(&text).unwrap();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        out.insert(name, serde_json::to_string_pretty(&Report::without_timing(&value)).unwrap());
    }
    out
}

fn main() -> ExitCode {
    let dir = suite_dir();
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();

    let start = Instant::now();
    let (summary, reports) = run_suite(&dir, first.path(), &RunOptions::default()).expect("suite runs");
    let elapsed = start.elapsed().as_secs_f64();

    let mut lines: Vec<(String, bool, String)> = Vec::new();
    for k in 1..=10 {
        let id = format!("AC{k}");
        let mine: Vec<&Report> = reports.iter().filter(|r| r.criterion.as_deref() == Some(id.as_str())).collect();
        let seconds: f64 = mine.iter().map(|r| r.timing.wall_seconds).sum();
        let mut ok = !mine.is_empty() && summary.criteria.get(&id).is_some_and(|v| v == "PASS");
        let mut detail = format!("{} scenarios, {seconds:.2} s", mine.len());
        if let Some((_, limit)) = LIMITS.iter().find(|(l, _)| *l == id) {
            ok &= seconds < *limit;
            detail.push_str(&format!(" (limit {limit} s)"));
        }
        for r in mine.iter().filter(|r| !r.passed()) {
            detail.push_str(&format!("; {}", r.summary_line()));
        }
        lines.push((id, ok, detail));
    }

    run_suite(&dir, second.path(), &RunOptions { jobs: Some(1), ..Default::default() }).expect("suite runs");
    let a = normalized(first.path());
    let b = normalized(second.path());
    let differing: Vec<&String> = a.keys().filter(|k| b.get(*k) != a.get(*k)).collect();
    let same = a.len() == b.len() && differing.is_empty() && a.len() == reports.len() + 1;
    lines.push((
        "AC11".into(),
        same,
        format!("{} files compared without timing, {} differ {differing:?}", a.len(), differing.len()),
    ));

    for (id, ok, detail) in &lines {
        println!("{id:<5} {}  {detail}", if *ok { "PASS" } else { "FAIL" });
    }
    println!("first suite run {elapsed:.2} s");
    if lines.iter().all(|l| l.1) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
