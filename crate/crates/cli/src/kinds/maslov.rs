//! `maslov`: index and lift test of one loop, or the randomized parity suite.
//!
//! Params: `{"preset": …, "m": int}`, `{"loop": {"n", "samples"}}` or
//! `{"random_suite": {"count": int, "m": int}}`.

use std::f64::consts::PI;

use lagrangian_core::maslov::{phase_increments, random_loop_suite, LoopRecord};
use lagrangian_core::{is_liftable, maslov_index, LagrangianLoop, LoopPreset};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

use super::{object, parse, take_usize, Failure, Handled, Outcome};
use crate::report::Check;
use crate::scenario::Context;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteParams {
    count: usize,
    m: usize,
}

enum Params {
    Preset(LoopPreset, usize),
    Custom(LoopRecord),
    Suite(SuiteParams),
}

fn parse_params(params: &serde_json::Value) -> Result<Params, Failure> {
    let mut obj = object(params)?;
    if let Some(lp) = obj.remove("loop") {
        if !obj.is_empty() {
            return Err(Failure::Params("`loop` takes no sibling fields".into()));
        }
        return Ok(Params::Custom(parse(lp, "loop")?));
    }
    if let Some(suite) = obj.remove("random_suite") {
        if !obj.is_empty() {
            return Err(Failure::Params("`random_suite` takes no sibling fields".into()));
        }
        return Ok(Params::Suite(parse(suite, "random_suite")?));
    }
    let m = take_usize(&mut obj, "m")?.ok_or_else(|| Failure::Params("missing sample count `m`".into()))?;
    Ok(Params::Preset(parse(obj.into(), "loop preset")?, m))
}

struct LoopSummary {
    index: i64,
    liftable: bool,
    max_increment: f64,
    defect: f64,
}

fn summarize(lp: &LagrangianLoop) -> lagrangian_core::Result<LoopSummary> {
    let increments = phase_increments(lp)?;
    let index = maslov_index(lp)?;
    let turns: f64 = increments.iter().sum::<f64>() / (2.0 * PI);
    Ok(LoopSummary {
        index,
        liftable: is_liftable(lp)?,
        max_increment: increments.iter().fold(0.0, |acc, x| acc.max(x.abs())),
        defect: (turns - index as f64).abs(),
    })
}

pub fn run(params: &serde_json::Value, ctx: &Context) -> Handled {
    match parse_params(params)? {
        Params::Preset(preset, m) => {
            let lp = preset.build(m)?.with_tolerances(ctx.tol);
            single(&lp, Some(preset.expected_index()))
        }
        Params::Custom(record) => single(&record.into_loop(ctx.tol)?, None),
        Params::Suite(p) => suite(p, ctx),
    }
}

fn single(lp: &LagrangianLoop, expected: Option<i64>) -> Handled {
    let s = summarize(lp)?;
    let mut checks = vec![Check::new(
        "parity_law",
        s.liftable == (s.index % 2 == 0),
        format!("index {} with liftable = {}", s.index, s.liftable),
    )];
    if let Some(e) = expected {
        checks.push(Check::new("index_by_construction", s.index == e, format!("index {} vs {e}", s.index)));
    }
    Ok(Outcome {
        result: json!({ "index": s.index, "liftable": s.liftable, "segments": lp.segments() }),
        residuals: json!({ "max_abs_increment": s.max_increment, "winding_defect": s.defect }),
        checks,
    })
}

fn suite(p: SuiteParams, ctx: &Context) -> Handled {
    let presets = random_loop_suite(p.count, ctx.seed);
    let rows = presets
        .par_iter()
        .map(|preset| {
            let lp = preset.build(p.m)?.with_tolerances(ctx.tol);
            Ok((preset.clone(), summarize(&lp)?))
        })
        .collect::<lagrangian_core::Result<Vec<_>>>()?;
    let agree = rows.iter().filter(|(_, s)| s.liftable == (s.index % 2 == 0)).count();
    let exact = rows.iter().filter(|(p, s)| s.index == p.expected_index()).count();
    let loops: Vec<_> =
        rows.iter().map(|(preset, s)| json!({ "preset": preset, "index": s.index, "liftable": s.liftable })).collect();
    let max_increment = rows.iter().map(|(_, s)| s.max_increment).fold(0.0, f64::max);
    let max_defect = rows.iter().map(|(_, s)| s.defect).fold(0.0, f64::max);
    Ok(Outcome {
        result: json!({ "loops": loops, "parity_agreement": agree, "total": rows.len(), "even": rows.iter().filter(|(_, s)| s.index % 2 == 0).count() }),
        residuals: json!({ "max_abs_increment": max_increment, "max_winding_defect": max_defect }),
        checks: vec![
            Check::new("parity_law", agree == rows.len(), format!("{agree}/{} loops agree", rows.len())),
            Check::new("index_by_construction", exact == rows.len(), format!("{exact}/{} indices match", rows.len())),
        ],
    })
}
