//! `cech`: Hörmander cocycles of section pairs over covers of the circle.
//!
//! `mode` selects the study; it defaults to `pairing`.

use lagrangian_core::cech::{
    build_cocycle, pair_with_fundamental_cycle, pairing, pullback_pairing, section_pair_suite, winding_difference,
    GoodCoverOnLoop, SectionOverLoop, SectionRecord, WINDING_SIGN,
};
use lagrangian_core::{maslov_index, LoopPreset};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::{object, parse, Failure, Handled, Outcome};
use crate::report::Check;
use crate::scenario::Context;

fn default_grid() -> usize {
    256
}

fn default_arcs() -> usize {
    8
}

fn default_overlap() -> f64 {
    0.25
}

/// A section given by preset name or by samples over one period.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SectionInput {
    Preset(LoopPreset),
    Samples(SectionRecord),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Pairing {
    x: SectionInput,
    y: SectionInput,
    /// Samples per period for preset sections; sampled sections bring their own.
    grid: Option<usize>,
    #[serde(default = "default_arcs")]
    arcs: usize,
    #[serde(default = "default_overlap")]
    overlap: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverIndependence {
    x: LoopPreset,
    y: LoopPreset,
    #[serde(default = "default_grid")]
    grid: usize,
    arcs: Vec<usize>,
    seeds: u64,
    #[serde(default = "default_overlap")]
    overlap: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairSuite {
    pairs: usize,
    #[serde(default = "default_grid")]
    grid: usize,
    #[serde(default = "default_arcs")]
    arcs: usize,
    #[serde(default = "default_overlap")]
    overlap: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Pullback {
    x: LoopPreset,
    y: LoopPreset,
    degrees: Vec<i64>,
    #[serde(default = "default_grid")]
    grid: usize,
    #[serde(default = "default_arcs")]
    arcs: usize,
    #[serde(default = "default_overlap")]
    overlap: f64,
}

pub fn run(params: &serde_json::Value, ctx: &Context) -> Handled {
    let mut obj = object(params)?;
    let mode = match obj.remove("mode") {
        None => "pairing".to_string(),
        Some(serde_json::Value::String(s)) => s,
        Some(_) => return Err(Failure::Params("`mode` must be a string".into())),
    };
    if mode == "pairing" && obj.contains_key("sections") {
        return single(parse(nested_pairing(obj)?, "pairing params")?, ctx);
    }
    let obj = serde_json::Value::Object(obj);
    match mode.as_str() {
        "pairing" => single(parse(obj, "pairing params")?, ctx),
        "cover_independence" => cover_independence(parse(obj, "cover_independence params")?, ctx),
        "antisymmetry" => antisymmetry(parse(obj, "antisymmetry params")?, ctx),
        "pullback" => pullback(parse(obj, "pullback params")?, ctx),
        "winding_oracle" => winding_oracle(parse(obj, "winding_oracle params")?, ctx),
        other => Err(Failure::Params(format!("unknown cech mode `{other}`"))),
    }
}

/// `{"sections": {"X", "Y"}, "cover": {"m", "overlap_fraction"}}` in flat form.
fn nested_pairing(mut obj: Map<String, Value>) -> Result<Value, Failure> {
    let mut sections = match obj.remove("sections") {
        Some(Value::Object(m)) => m,
        _ => return Err(Failure::Params("`sections` must be an object with `X` and `Y`".into())),
    };
    let mut flat = Map::new();
    for (from, to) in [("X", "x"), ("Y", "y")] {
        let v = sections.remove(from).ok_or_else(|| Failure::Params(format!("`sections.{from}` is missing")))?;
        flat.insert(to.into(), v);
    }
    if !sections.is_empty() {
        return Err(Failure::Params("`sections` takes only `X` and `Y`".into()));
    }
    if let Some(cover) = obj.remove("cover") {
        let mut cover = object(&cover)?;
        for (from, to) in [("m", "arcs"), ("overlap_fraction", "overlap")] {
            if let Some(v) = cover.remove(from) {
                flat.insert(to.into(), v);
            }
        }
        if !cover.is_empty() {
            return Err(Failure::Params("`cover` takes only `m` and `overlap_fraction`".into()));
        }
    }
    flat.extend(obj);
    Ok(Value::Object(flat))
}

fn input_section(input: SectionInput, grid: usize, ctx: &Context) -> lagrangian_core::Result<SectionOverLoop> {
    match input {
        SectionInput::Preset(p) => section(&p, grid, ctx),
        SectionInput::Samples(r) => r.into_section(ctx.tol),
    }
}

fn section(preset: &LoopPreset, grid: usize, ctx: &Context) -> lagrangian_core::Result<SectionOverLoop> {
    Ok(SectionOverLoop::from_preset(preset, grid)?.with_tolerances(ctx.tol))
}

fn single(p: Pairing, ctx: &Context) -> Handled {
    let sampled = [&p.x, &p.y].into_iter().find_map(|s| match s {
        SectionInput::Samples(r) => Some(r.samples.len()),
        SectionInput::Preset(_) => None,
    });
    let grid = match (sampled, p.grid) {
        (Some(a), Some(b)) if a != b => {
            return Err(Failure::Params(format!("`grid` is {b} but the sampled section has {a} samples")));
        }
        (Some(g), _) | (None, Some(g)) => g,
        (None, None) => default_grid(),
    };
    let x = input_section(p.x, grid, ctx)?;
    let y = input_section(p.y, grid, ctx)?;
    if x.grid() != y.grid() {
        return Err(Failure::Params(format!("sections have {} and {} samples", x.grid(), y.grid())));
    }
    let cover = GoodCoverOnLoop::uniform(p.arcs, p.overlap, grid)?;
    let cocycle = build_cocycle(&x, &y, &cover, ctx.seed)?;
    let value = pair_with_fundamental_cycle(&cocycle);
    let reverse = pairing(&y, &x, &cover, ctx.seed)?;
    let oracle = winding_difference(&x, &y)?;
    let edges: Vec<i64> = (0..p.arcs).map(|a| cocycle.value(a, (a + 1) % p.arcs).expect("adjacent arcs")).collect();
    Ok(Outcome {
        result: json!({ "pairing": value, "cocycle": edges, "winding_difference": oracle }),
        residuals: json!({}),
        checks: vec![
            Check::new("antisymmetry", reverse == -value, format!("pairing(Y, X) = {reverse}")),
            Check::new("winding_oracle", oracle == value, format!("s·(ℓ_Y − ℓ_X) = {oracle} with s = {WINDING_SIGN}")),
        ],
    })
}

fn cover_independence(p: CoverIndependence, ctx: &Context) -> Handled {
    let x = section(&p.x, p.grid, ctx)?;
    let y = section(&p.y, p.grid, ctx)?;
    let runs: Vec<(usize, u64)> = p.arcs.iter().flat_map(|&a| (0..p.seeds).map(move |s| (a, s))).collect();
    let values = runs
        .par_iter()
        .map(|&(arcs, s)| {
            let cover = GoodCoverOnLoop::uniform(arcs, p.overlap, p.grid)?;
            pairing(&x, &y, &cover, ctx.seed.wrapping_add(s))
        })
        .collect::<lagrangian_core::Result<Vec<_>>>()?;
    let same = values.windows(2).all(|w| w[0] == w[1]);
    Ok(Outcome {
        result: json!({ "values": values, "runs": runs.len() }),
        residuals: json!({}),
        checks: vec![Check::new("cover_independent", same && !values.is_empty(), format!("{values:?}"))],
    })
}

fn suite_sections(p: &PairSuite, ctx: &Context) -> lagrangian_core::Result<Vec<(SectionOverLoop, SectionOverLoop)>> {
    section_pair_suite(p.pairs, ctx.seed)
        .iter()
        .map(|(a, b)| Ok((section(a, p.grid, ctx)?, section(b, p.grid, ctx)?)))
        .collect()
}

fn antisymmetry(p: PairSuite, ctx: &Context) -> Handled {
    let cover = GoodCoverOnLoop::uniform(p.arcs, p.overlap, p.grid)?;
    let sections = suite_sections(&p, ctx)?;
    let rows = sections
        .par_iter()
        .enumerate()
        .map(|(i, (x, y))| {
            let s = ctx.seed.wrapping_add(i as u64);
            Ok((pairing(x, y, &cover, s)?, pairing(y, x, &cover, s)?, pairing(x, x, &cover, s)?))
        })
        .collect::<lagrangian_core::Result<Vec<_>>>()?;
    let antisym = rows.iter().filter(|(a, b, _)| *a != -*b).count();
    let diagonal = rows.iter().filter(|(_, _, d)| *d != 0).count();
    Ok(Outcome {
        result: json!({ "pairs": rows.len(), "pairings": rows.iter().map(|r| r.0).collect::<Vec<_>>() }),
        residuals: json!({}),
        checks: vec![
            Check::new("antisymmetry", antisym == 0, format!("{antisym} violations")),
            Check::new("diagonal_vanishes", diagonal == 0, format!("{diagonal} violations")),
        ],
    })
}

fn pullback(p: Pullback, ctx: &Context) -> Handled {
    let cover = GoodCoverOnLoop::uniform(p.arcs, p.overlap, p.grid)?;
    let x = section(&p.x, p.grid, ctx)?;
    let y = section(&p.y, p.grid, ctx)?;
    let base = pairing(&x, &y, &cover, ctx.seed)?;
    let values = p
        .degrees
        .par_iter()
        .map(|&d| pullback_pairing(d, &x, &y, &cover, ctx.seed))
        .collect::<lagrangian_core::Result<Vec<_>>>()?;
    let bad: Vec<i64> = p.degrees.iter().zip(&values).filter(|(d, v)| **v != **d * base).map(|(d, _)| *d).collect();
    Ok(Outcome {
        result: json!({ "base": base, "degrees": p.degrees, "values": values }),
        residuals: json!({}),
        checks: vec![Check::new("degree_scaling", bad.is_empty(), format!("mismatched degrees {bad:?}"))],
    })
}

fn winding_oracle(p: PairSuite, ctx: &Context) -> Handled {
    let cover = GoodCoverOnLoop::uniform(p.arcs, p.overlap, p.grid)?;
    let sections = suite_sections(&p, ctx)?;
    let rows = sections
        .par_iter()
        .enumerate()
        .map(|(i, (x, y))| {
            let value = pairing(x, y, &cover, ctx.seed.wrapping_add(i as u64))?;
            let lx = maslov_index(&x.as_loop()?)?;
            let ly = maslov_index(&y.as_loop()?)?;
            Ok((value, ly - lx))
        })
        .collect::<lagrangian_core::Result<Vec<_>>>()?;
    let pinned = rows.iter().filter(|(v, d)| *v != WINDING_SIGN * d).count();
    let flipped = rows.iter().filter(|(v, d)| *v != -WINDING_SIGN * d).count();
    Ok(Outcome {
        result: json!({
            "sign": WINDING_SIGN,
            "pairs": rows.len(),
            "pairings": rows.iter().map(|r| r.0).collect::<Vec<_>>(),
            "winding_differences": rows.iter().map(|r| r.1).collect::<Vec<_>>(),
        }),
        residuals: json!({}),
        checks: vec![
            Check::new("pinned_sign", pinned == 0, format!("{pinned} pairs disagree with s = {WINDING_SIGN}")),
            Check::new(
                "flipped_sign_detected",
                flipped > 0,
                format!("{flipped} pairs disagree with s = {}", -WINDING_SIGN),
            ),
        ],
    })
}
