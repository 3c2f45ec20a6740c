//! Maslov classes of immersed tori and the instance-level Fomenko check.

use std::f64::consts::PI;

use serde::Serialize;

use super::curvature::{analyze, tangent_at, MeanCurvatureData};
use super::ImmersedLagrangianGrid;
use crate::cech::{pairing, GoodCoverOnLoop, SectionOverLoop, WINDING_SIGN};
use crate::error::{Error, Result};
use crate::linalg;
use crate::maslov::{maslov_index, LagrangianLoop};
use crate::symplectic::LagrangianFrame;

/// Sign turning `pairing(G, A)` into the Maslov class; fixed so that the
/// unit circle in `C` has class `+2`.
pub const MASLOV_CLASS_SIGN: i64 = -WINDING_SIGN;

const COVER_OVERLAP: f64 = 0.25;
const COVER_ARCS: usize = 8;

/// Gauss map along the grid line of `axis` through node 0.
///
/// Discrete tangent planes are isotropic only up to `O(h²)`; each one is
/// replaced by the nearest Lagrangian plane (unitary polar factor of `A + iB`).
pub fn gauss_section(grid: &ImmersedLagrangianGrid, axis: usize) -> Result<SectionOverLoop> {
    grid.require_periodic()?;
    if axis >= grid.k() {
        return Err(Error::InvalidInput(format!("no generator {axis} on a {}-torus", grid.k())));
    }
    let n = grid.n();
    let samples = (0..grid.shape()[axis])
        .map(|i| {
            let (e, _) = tangent_at(grid, i * grid.stride(axis))?;
            let a = e.rows(0, n).clone_owned();
            let b = e.rows(n, n).clone_owned();
            let u = linalg::unitary_polar(&linalg::complex_from_parts(&a, &b));
            LagrangianFrame::from_unitary(*grid.space(), &u)
        })
        .collect::<Result<Vec<_>>>()?;
    SectionOverLoop::new(samples)
}

/// One Gauss loop per periodic generator.
pub fn gauss_loops(grid: &ImmersedLagrangianGrid) -> Result<Vec<LagrangianLoop>> {
    (0..grid.k()).map(|a| gauss_section(grid, a)?.as_loop()).collect()
}

/// `period / π` per generator.
pub fn maslov_via_beta(data: &MeanCurvatureData) -> Option<Vec<f64>> {
    Some(data.periods.as_ref()?.iter().map(|p| p / PI).collect())
}

/// Maslov class on generator `axis` as the Hörmander pairing of the Gauss
/// section with the vertical section.
pub fn maslov_class_hormander(grid: &ImmersedLagrangianGrid, axis: usize, seed: u64) -> Result<i64> {
    let gauss = gauss_section(grid, axis)?;
    let vertical = SectionOverLoop::constant(grid.vertical_section(), gauss.grid())?;
    // An overlap is centred on a grid point and must hold two of them.
    let most = (COVER_OVERLAP * gauss.grid() as f64 / 2.0).floor() as usize;
    let mut arcs = most.clamp(3, COVER_ARCS);
    loop {
        let cover = GoodCoverOnLoop::uniform(arcs, COVER_OVERLAP, gauss.grid())?;
        // A finer cover is tried only when some arc admits no transversal
        // plane; every cover gives the same class.
        match pairing(&gauss, &vertical, &cover, seed) {
            Ok(value) => return Ok(MASLOV_CLASS_SIGN * value),
            Err(Error::RetryExhausted { .. }) if 2 * arcs <= most => arcs *= 2,
            Err(e) => return Err(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    Violation,
}

/// Instance-level report: LH membership, closedness of `β` and the Maslov
/// indices by three routes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FomenkoReport {
    pub lh_member: bool,
    pub periods: Vec<f64>,
    pub generator_lengths: Vec<f64>,
    pub lh_rel: f64,
    pub max_abs_d_beta: f64,
    pub maslov_gauss: Vec<i64>,
    pub maslov_hormander: Vec<i64>,
    pub maslov_beta: Vec<f64>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Checks that LH membership implies vanishing Maslov indices on this instance.
pub fn fomenko_check(grid: &ImmersedLagrangianGrid, seed: u64) -> Result<FomenkoReport> {
    let data = analyze(grid)?;
    fomenko_from(grid, &data, seed)
}

pub(crate) fn fomenko_from(
    grid: &ImmersedLagrangianGrid,
    data: &MeanCurvatureData,
    seed: u64,
) -> Result<FomenkoReport> {
    let lh_rel = grid.space().tolerances().lh_rel;
    let lh_member = data.lh_member(lh_rel).expect("analyzed data");
    let maslov_gauss = gauss_loops(grid)?.iter().map(maslov_index).collect::<Result<Vec<_>>>()?;
    let maslov_hormander = (0..grid.k()).map(|a| maslov_class_hormander(grid, a, seed)).collect::<Result<Vec<_>>>()?;
    let all_zero = maslov_gauss.iter().chain(&maslov_hormander).all(|&l| l == 0);
    let verdict = if !lh_member || all_zero { Verdict::Consistent } else { Verdict::Violation };
    Ok(FomenkoReport {
        lh_member,
        periods: data.periods.clone().expect("analyzed data"),
        generator_lengths: data.generator_lengths.clone().expect("analyzed data"),
        lh_rel,
        max_abs_d_beta: data.max_abs_d_beta().expect("analyzed data"),
        maslov_beta: maslov_via_beta(data).expect("analyzed data"),
        maslov_gauss,
        maslov_hormander,
        verdict,
        note: (!lh_member).then(|| "not in LH".to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::SurfacePreset;

    #[test]
    fn circle_classes() {
        let grid = SurfacePreset::Circle { r: 1.0, m: 256 }.build().unwrap();
        let loops = gauss_loops(&grid).unwrap();
        assert_eq!(maslov_index(&loops[0]).unwrap(), 2);
        assert_eq!(maslov_class_hormander(&grid, 0, 0).unwrap(), 2);
        let report = fomenko_check(&grid, 0).unwrap();
        assert_eq!(report.verdict, Verdict::Consistent);
        assert_eq!(report.note.as_deref(), Some("not in LH"));
        assert!((report.maslov_beta[0] - 2.0).abs() < 0.05);
    }

    #[test]
    fn flat_torus_classes_vanish() {
        let grid = SurfacePreset::FlatPlane { n: 2, m: 32 }.build().unwrap();
        let report = fomenko_check(&grid, 3).unwrap();
        assert!(report.lh_member);
        assert_eq!(report.maslov_gauss, vec![0, 0]);
        assert_eq!(report.maslov_hormander, vec![0, 0]);
        assert_eq!(report.maslov_beta, vec![0.0, 0.0]);
        assert_eq!(report.verdict, Verdict::Consistent);
        assert_eq!(report.note, None);
    }

    #[test]
    fn product_torus_classes() {
        let grid = SurfacePreset::ProductTorus { radii: vec![1.0, 2.0], m: 64 }.build().unwrap();
        let report = fomenko_check(&grid, 1).unwrap();
        assert_eq!(report.maslov_gauss, vec![2, 2]);
        assert_eq!(report.maslov_hormander, vec![2, 2]);
        assert!(!report.lh_member);
    }

    #[test]
    fn bad_generator() {
        let grid = SurfacePreset::Circle { r: 1.0, m: 16 }.build().unwrap();
        assert!(matches!(gauss_section(&grid, 1), Err(Error::InvalidInput(_))));
    }
}
