//! `hormander`: the index of four planes, or the relation check on random planes.
//!
//! Params: `{"preset": "r2_quadruple"}`, `{"x", "y", "z", "w"}` as frame
//! records, or `{"relations": {"count": int, "dims": [int]}}`.

use lagrangian_core::hormander::{index_of, q_form};
use lagrangian_core::symplectic::FrameRecord;
use lagrangian_core::{LagrangianFrame, SymplecticSpace};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

use super::{object, parse, Failure, Handled, Outcome};
use crate::report::Check;
use crate::scenario::Context;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Quadruple {
    x: FrameRecord,
    y: FrameRecord,
    z: FrameRecord,
    w: FrameRecord,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Relations {
    count: usize,
    #[serde(default = "default_dims")]
    dims: Vec<usize>,
}

fn default_dims() -> Vec<usize> {
    vec![1, 2, 3]
}

#[derive(Debug, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
enum Preset {
    /// `span(1,0), span(0,1), span(1,1), span(1,−1)` in `R²`; index 1.
    R2Quadruple,
}

enum Params {
    Preset(Preset),
    Planes(Quadruple),
    Relations(Relations),
}

fn parse_params(params: &serde_json::Value) -> Result<Params, Failure> {
    let mut obj = object(params)?;
    if obj.contains_key("preset") {
        return Ok(Params::Preset(parse(obj.into(), "hormander preset")?));
    }
    if let Some(r) = obj.remove("relations") {
        if !obj.is_empty() {
            return Err(Failure::Params("`relations` takes no sibling fields".into()));
        }
        return Ok(Params::Relations(parse(r, "relations")?));
    }
    Ok(Params::Planes(parse(obj.into(), "planes")?))
}

pub fn run(params: &serde_json::Value, ctx: &Context) -> Handled {
    match parse_params(params)? {
        Params::Preset(Preset::R2Quadruple) => {
            let space = SymplecticSpace::new(1)?.with_tolerances(ctx.tol);
            let line = |a: f64, b: f64| SymplecticSpace::line(b.atan2(a)).with_space(space);
            single([line(1.0, 0.0), line(0.0, 1.0), line(1.0, 1.0), line(1.0, -1.0)], Some(1))
        }
        Params::Planes(q) => {
            let planes = [q.x, q.y, q.z, q.w].map(|r| r.into_frame(ctx.tol));
            let [x, y, z, w] = planes;
            single([x?, y?, z?, w?], None)
        }
        Params::Relations(r) => relations(r, ctx),
    }
}

fn single([x, y, z, w]: [LagrangianFrame; 4], oracle: Option<i64>) -> Handled {
    let index = index_of(&x, &y, &z, &w)?;
    let qz = q_form(&x, &y, &z)?;
    let qw = q_form(&x, &y, &w)?;
    let sz = qz.signature()?;
    let sw = qw.signature()?;
    let swapped = index_of(&x, &y, &w, &z)?;
    let mut checks = vec![
        Check::new("antisymmetry_in_z_w", swapped == -index, format!("(X,Y,W,Z) = {swapped}")),
        Check::new(
            "index_form",
            sw.index() - sz.index() == index,
            format!("ind Q_W − ind Q_Z = {}", sw.index() - sz.index()),
        ),
    ];
    if let Some(o) = oracle {
        checks.push(Check::new("oracle", index == o, format!("index {index} vs {o}")));
    }
    Ok(Outcome {
        result: json!({
            "index": index,
            "sign_qz": sz.sign(),
            "sign_qw": sw.sign(),
            "quotient_rank": qz.rank(),
        }),
        residuals: json!({}),
        checks,
    })
}

fn relations(r: Relations, ctx: &Context) -> Handled {
    if r.dims.is_empty() || r.dims.contains(&0) {
        return Err(Failure::Params("`dims` must list positive dimensions".into()));
    }
    let cases: Vec<(usize, u64)> = r.dims.iter().flat_map(|&n| (0..r.count as u64).map(move |i| (n, i))).collect();
    let tallies = cases
        .par_iter()
        .map(|&(n, i)| {
            let space = SymplecticSpace::new(n)?.with_tolerances(ctx.tol);
            let base = ctx.seed.wrapping_mul(1_000_003).wrapping_add(i * 8);
            let [x, y, z, w, v]: [LagrangianFrame; 5] =
                std::array::from_fn(|k| space.random_lagrangian(base + k as u64));
            let zw = index_of(&x, &y, &z, &w)?;
            let swap = zw == -index_of(&x, &y, &w, &z)?;
            let cycle = zw + index_of(&x, &y, &w, &v)? + index_of(&x, &y, &v, &z)? == 0;
            let pairs = zw == -index_of(&z, &w, &x, &y)?;
            Ok([!swap as usize, !cycle as usize, !pairs as usize])
        })
        .collect::<lagrangian_core::Result<Vec<_>>>()?;
    let sum = |k: usize| tallies.iter().map(|t| t[k]).sum::<usize>();
    let (swap, cycle, pairs) = (sum(0), sum(1), sum(2));
    Ok(Outcome {
        result: json!({
            "cases": cases.len(),
            "violations": { "swap_z_w": swap, "cocycle": cycle, "swap_pairs": pairs },
        }),
        residuals: json!({}),
        checks: vec![
            Check::new("swap_z_w", swap == 0, format!("{swap} violations")),
            Check::new("cocycle", cycle == 0, format!("{cycle} violations")),
            Check::new("swap_pairs", pairs == 0, format!("{pairs} violations")),
        ],
    })
}
