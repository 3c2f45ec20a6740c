//! Directory runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::report::{Report, Status};
use crate::scenario::{Kind, RunOptions, Scenario};
use crate::{invalid_report, run_scenario};

/// File name of the aggregate written next to the reports.
pub const SUMMARY_FILE: &str = "summary.json";

/// A finished scenario and where its report goes.
type Run = (Report, Option<String>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    pub status: Status,
    pub report: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenarios: Vec<SummaryRow>,
    /// `"PASS"` or `"FAIL"` per criterion ID; a criterion fails if any of its scenarios does.
    pub criteria: BTreeMap<String, String>,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn table(&self, reports: &[Report]) -> String {
        let mut out = String::new();
        for r in reports {
            out.push_str(&r.summary_line());
            out.push('\n');
        }
        if !self.criteria.is_empty() {
            out.push('\n');
            let mut ids: Vec<_> = self.criteria.iter().collect();
            // AC2 before AC10
            ids.sort_by_key(|(id, _)| (id.len(), id.as_str()));
            for (id, verdict) in ids {
                out.push_str(&format!("{id:<6} {verdict}\n"));
            }
        }
        out.push_str(&format!("\n{} passed, {} failed\n", self.passed, self.failed));
        out
    }
}

/// Scenario files of a directory in name order. Reports and summaries from
/// earlier runs are skipped, so `out_dir` may equal `dir`.
pub fn scenario_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            !name.ends_with(".report.json") && name != SUMMARY_FILE
        })
        .collect();
    files.sort();
    Ok(files)
}

fn load(path: &Path, opts: &RunOptions) -> Run {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario").to_string();
    match Scenario::from_file(path, None) {
        Ok(s) if s.kind == Kind::Suite => {
            (invalid_report(&name, Some(Kind::Suite), "suites do not nest".into(), opts), None)
        }
        Ok(s) => (run_scenario(&s, &name, opts), s.output_path),
        Err(e) => (invalid_report(&name, None, e, opts), None),
    }
}

/// Scenarios run on `jobs` worker threads; computations inside a scenario
/// still use the global rayon pool. Results come back in file order.
fn run_all(files: &[PathBuf], jobs: usize, opts: &RunOptions) -> Vec<Run> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Run>>> = files.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(file) = files.get(i) else { break };
                *slots[i].lock().expect("no poisoned slots") = Some(load(file, opts));
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().expect("no poisoned slots").expect("every file ran")).collect()
}

/// Run every scenario in `dir`, write `<stem>.report.json` (or the
/// scenario's `output_path`, relative to `out_dir`) and `summary.json`.
pub fn run_suite(dir: &Path, out_dir: &Path, opts: &RunOptions) -> std::io::Result<(Summary, Vec<Report>)> {
    let files = scenario_files(dir)?;
    fs::create_dir_all(out_dir)?;
    let jobs = opts.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let start = Instant::now();
    let runs = run_all(&files, jobs.clamp(1, files.len().max(1)), opts);

    let mut rows = Vec::with_capacity(runs.len());
    let mut criteria = BTreeMap::new();
    for (report, output_path) in &runs {
        let file = output_path.clone().unwrap_or_else(|| format!("{}.report.json", report.name));
        let path = out_dir.join(&file);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, report.to_json())?;
        if let Some(id) = &report.criterion {
            let entry = criteria.entry(id.clone()).or_insert("PASS".to_string());
            if !report.passed() {
                *entry = "FAIL".to_string();
            }
        }
        rows.push(SummaryRow {
            name: report.name.clone(),
            criterion: report.criterion.clone(),
            status: report.status,
            report: file,
        });
    }
    let failed = rows.iter().filter(|r| r.status != Status::Passed).count();
    let summary = Summary { passed: rows.len() - failed, failed, scenarios: rows, criteria };
    let mut value = serde_json::to_value(&summary).expect("summary serializes");
    value["timing"] = serde_json::json!({ "wall_seconds": start.elapsed().as_secs_f64() });
    let mut text = serde_json::to_string_pretty(&value).expect("summary serializes");
    text.push('\n');
    fs::write(out_dir.join(SUMMARY_FILE), text)?;
    let reports = runs.into_iter().map(|(r, _)| r).collect();
    Ok((summary, reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_directory() {
        let dir = tempfile::tempdir().unwrap();
        let (summary, reports) = run_suite(dir.path(), dir.path(), &RunOptions::default()).unwrap();
        assert!(reports.is_empty() && summary.scenarios.is_empty() && summary.criteria.is_empty());
        assert!(summary.all_passed());
        assert!(dir.path().join(SUMMARY_FILE).exists());
    }

    #[test]
    fn failing_scenario_marks_its_criterion() {
        let dir = tempfile::tempdir().unwrap();
        let ok = r#"{"kind":"maslov","params":{"preset":"rotating_line","k":1,"m":64},"criterion":"AC2"}"#;
        let bad = r#"{"kind":"maslov","params":{"preset":"rotating_line","k":3,"m":4},"criterion":"AC1"}"#;
        fs::write(dir.path().join("a.json"), ok).unwrap();
        fs::write(dir.path().join("b.json"), bad).unwrap();
        fs::write(dir.path().join("c.json"), "{not json").unwrap();
        let out = dir.path().join("out");
        let (summary, reports) = run_suite(dir.path(), &out, &RunOptions::default()).unwrap();
        assert_eq!(reports.len(), 3);
        assert_eq!(summary.criteria["AC1"], "FAIL");
        assert_eq!(summary.criteria["AC2"], "PASS");
        assert_eq!(summary.failed, 2);
        assert!(out.join("b.report.json").exists());
        // reports in the scenario directory are not picked up again
        let (again, _) = run_suite(&out, &out, &RunOptions::default()).unwrap();
        assert!(again.scenarios.is_empty());
    }
}
