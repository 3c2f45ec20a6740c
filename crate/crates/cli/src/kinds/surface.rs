//! `surface` and `fomenko`: mean-curvature data of sampled immersions.
//!
//! An immersion is either a preset object (with a `"preset"` key) or a
//! custom `{"k", "n", "periodic", "positions"}` record.

use lagrangian_core::surface::{
    analyze, fomenko_check, gauss_loops, maslov_class_hormander, maslov_via_beta, tangent_frames, ImmersionRecord,
    SurfacePreset, Verdict,
};
use lagrangian_core::{maslov_index, ImmersedLagrangianGrid};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use super::{object, parse, to_value, Failure, Handled, Outcome};
use crate::report::Check;
use crate::scenario::Context;

/// Allowed distance of `period/π` from the integer index in single analyses.
const BETA_IDENTITY_TOL: f64 = 0.05;

enum Immersion {
    Preset(SurfacePreset),
    Custom(Box<ImmersionRecord>),
}

impl<'de> Deserialize<'de> for Immersion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = Value::deserialize(d)?;
        if v.get("preset").is_some() {
            serde_json::from_value(v).map(Immersion::Preset).map_err(D::Error::custom)
        } else {
            serde_json::from_value(v).map(|r| Immersion::Custom(Box::new(r))).map_err(D::Error::custom)
        }
    }
}

impl Immersion {
    fn build(self, ctx: &Context) -> lagrangian_core::Result<(ImmersedLagrangianGrid, Option<SurfacePreset>)> {
        Ok(match self {
            Immersion::Preset(p) => (p.build()?.with_tolerances(ctx.tol), Some(p)),
            Immersion::Custom(r) => (r.into_grid(ctx.tol)?, None),
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Analyze {
    immersion: Immersion,
}

fn default_first_bound() -> f64 {
    0.1
}

fn default_ratio() -> f64 {
    1.8
}

fn default_floor() -> f64 {
    1e-12
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Convergence {
    preset: SurfacePreset,
    ms: Vec<usize>,
    #[serde(default = "default_first_bound")]
    first_bound: f64,
    #[serde(default = "default_ratio")]
    min_ratio: f64,
    /// Values at or below this count as converged to rounding level.
    #[serde(default = "default_floor")]
    floor: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BetaIdentity {
    presets: Vec<SurfacePreset>,
    ms: Vec<usize>,
    bounds: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Perturbed {
    count: u64,
    n: usize,
    m: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TwoRoute {
    #[serde(default)]
    presets: Vec<SurfacePreset>,
    #[serde(default)]
    perturbed: Option<Perturbed>,
}

pub fn run(params: &Value, ctx: &Context) -> Handled {
    let mut obj = object(params)?;
    let mode = match obj.remove("mode") {
        None => "analyze".to_string(),
        Some(Value::String(s)) => s,
        Some(_) => return Err(Failure::Params("`mode` must be a string".into())),
    };
    let obj = Value::Object(obj);
    match mode.as_str() {
        "analyze" => single(parse(obj, "analyze params")?, ctx),
        "convergence" => convergence(parse(obj, "convergence params")?, ctx),
        "beta_identity" => beta_identity(parse(obj, "beta_identity params")?, ctx),
        "two_route" => two_route(parse(obj, "two_route params")?, ctx),
        other => Err(Failure::Params(format!("unknown surface mode `{other}`"))),
    }
}

fn gauss_indices(grid: &ImmersedLagrangianGrid) -> lagrangian_core::Result<Vec<i64>> {
    gauss_loops(grid)?.iter().map(maslov_index).collect()
}

fn hormander_indices(grid: &ImmersedLagrangianGrid, seed: u64) -> lagrangian_core::Result<Vec<i64>> {
    (0..grid.k()).map(|a| maslov_class_hormander(grid, a, seed)).collect()
}

fn single(p: Analyze, ctx: &Context) -> Handled {
    let (grid, preset) = p.immersion.build(ctx)?;
    let data = analyze(&grid)?;
    let residual = tangent_frames(&grid)?.iter().map(|f| f.lagrangian_residual()).fold(0.0, f64::max);
    let gauss = gauss_indices(&grid)?;
    let hormander = hormander_indices(&grid, ctx.seed)?;
    let beta = maslov_via_beta(&data).expect("analyzed");
    let lh = data.lh_member(ctx.tol.lh_rel).expect("analyzed");
    let beta_gap = beta.iter().zip(&gauss).map(|(b, l)| (b - *l as f64).abs()).fold(0.0, f64::max);
    let mut checks = vec![
        Check::new("two_route_agreement", gauss == hormander, format!("gauss {gauss:?}, hormander {hormander:?}")),
        Check::new("beta_identity", beta_gap <= BETA_IDENTITY_TOL, format!("max |period/π − ℓ| = {beta_gap:.3e}")),
    ];
    if let Some(preset) = &preset {
        let expected = preset.expected_maslov();
        checks.push(Check::new("index_by_construction", gauss == expected, format!("{gauss:?} vs {expected:?}")));
    }
    let max_h =
        data.h.chunks(grid.space().dim()).map(|h| h.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(0.0, f64::max);
    Ok(Outcome {
        result: json!({
            "periods": data.periods,
            "generator_lengths": data.generator_lengths,
            "lh_member": lh,
            "maslov_beta": beta,
            "maslov_gauss": gauss,
            "maslov_hormander": hormander,
            "max_abs_h": max_h,
        }),
        residuals: json!({
            "max_abs_d_beta": data.max_abs_d_beta(),
            "max_lagrangian_residual": residual,
            "max_beta_identity_gap": beta_gap,
        }),
        checks,
    })
}

fn convergence(p: Convergence, ctx: &Context) -> Handled {
    if p.ms.is_empty() {
        return Err(Failure::Params("`ms` must not be empty".into()));
    }
    let values =
        p.ms.iter()
            .map(|&m| {
                let grid = p.preset.with_m(m).build()?.with_tolerances(ctx.tol);
                Ok(analyze(&grid)?.max_abs_d_beta().expect("analyzed"))
            })
            .collect::<lagrangian_core::Result<Vec<f64>>>()?;
    let ratios: Vec<Option<f64>> = values.windows(2).map(|w| (w[1] > 0.0).then(|| w[0] / w[1])).collect();
    let decreasing = values.windows(2).all(|w| w[1] <= p.floor || w[0] >= p.min_ratio * w[1]);
    Ok(Outcome {
        result: json!({ "ms": p.ms, "max_abs_d_beta": values, "ratios": ratios }),
        residuals: json!({ "finest": values.last() }),
        checks: vec![
            Check::new("coarse_bound", values[0] <= p.first_bound, format!("{:.3e} at m = {}", values[0], p.ms[0])),
            Check::new(
                "refinement_rate",
                decreasing,
                format!("ratios {ratios:?} (need ≥ {}; values ≤ {:.0e} count as converged)", p.min_ratio, p.floor),
            ),
        ],
    })
}

fn beta_identity(p: BetaIdentity, ctx: &Context) -> Handled {
    if p.ms.len() != p.bounds.len() {
        return Err(Failure::Params("`ms` and `bounds` must have equal length".into()));
    }
    let cases: Vec<(usize, usize)> = (0..p.presets.len()).flat_map(|i| (0..p.ms.len()).map(move |j| (i, j))).collect();
    let rows = cases
        .iter()
        .map(|&(i, j)| {
            let grid = p.presets[i].with_m(p.ms[j]).build()?.with_tolerances(ctx.tol);
            let data = analyze(&grid)?;
            let gauss = gauss_indices(&grid)?;
            let beta = maslov_via_beta(&data).expect("analyzed");
            let gap = beta.iter().zip(&gauss).map(|(b, l)| (b - *l as f64).abs()).fold(0.0, f64::max);
            Ok(json!({
                "preset": to_value(&p.presets[i]),
                "m": p.ms[j],
                "maslov_gauss": gauss,
                "maslov_beta": beta,
                "gap": gap,
                "bound": p.bounds[j],
                "within": gap <= p.bounds[j],
            }))
        })
        .collect::<lagrangian_core::Result<Vec<Value>>>()?;
    let bad = rows.iter().filter(|r| r["within"] != json!(true)).count();
    let worst = rows.iter().filter_map(|r| r["gap"].as_f64()).fold(0.0, f64::max);
    Ok(Outcome {
        result: json!({ "cases": rows }),
        residuals: json!({ "max_gap": worst }),
        checks: vec![Check::new("beta_identity", bad == 0, format!("{bad} of {} cases out of bounds", rows.len()))],
    })
}

fn two_route(p: TwoRoute, ctx: &Context) -> Handled {
    let mut presets = p.presets;
    if let Some(q) = &p.perturbed {
        presets.extend((0..q.count).map(|s| SurfacePreset::perturbed_torus(q.n, ctx.seed.wrapping_add(s), q.m)));
    }
    if presets.is_empty() {
        return Err(Failure::Params("no immersions given".into()));
    }
    let rows = presets
        .par_iter()
        .enumerate()
        .map(|(i, preset)| {
            let grid = preset.build()?.with_tolerances(ctx.tol);
            let gauss = gauss_indices(&grid)?;
            let hormander = hormander_indices(&grid, ctx.seed.wrapping_add(i as u64))?;
            Ok((gauss, hormander))
        })
        .collect::<lagrangian_core::Result<Vec<_>>>()?;
    let disagree = rows.iter().filter(|(g, h)| g != h).count();
    let wrong = rows.iter().zip(&presets).filter(|((g, _), p)| *g != p.expected_maslov()).count();
    Ok(Outcome {
        result: json!({
            "immersions": rows.len(),
            "maslov_gauss": rows.iter().map(|r| &r.0).collect::<Vec<_>>(),
            "maslov_hormander": rows.iter().map(|r| &r.1).collect::<Vec<_>>(),
        }),
        residuals: json!({}),
        checks: vec![
            Check::new("two_route_agreement", disagree == 0, format!("{disagree} immersions disagree")),
            Check::new("index_by_construction", wrong == 0, format!("{wrong} immersions off their known index")),
        ],
    })
}

pub fn run_fomenko(params: &Value, ctx: &Context) -> Handled {
    let p: Analyze = parse(params.clone(), "fomenko params")?;
    let (grid, preset) = p.immersion.build(ctx)?;
    let report = fomenko_check(&grid, ctx.seed)?;
    let mut checks = vec![Check::new(
        "consistent",
        report.verdict == Verdict::Consistent,
        format!("LH = {}, indices {:?} / {:?}", report.lh_member, report.maslov_gauss, report.maslov_hormander),
    )];
    if let Some(preset) = &preset {
        let expected = preset.expected_lh();
        checks.push(Check::new(
            "lh_classification",
            report.lh_member == expected,
            format!("LH verdict {} for an immersion with exact β = {expected}", report.lh_member),
        ));
    }
    Ok(Outcome { residuals: json!({ "max_abs_d_beta": report.max_abs_d_beta }), result: to_value(&report), checks })
}
