use std::f64::consts::PI;

use lagrangian_core::maslov_index;
use lagrangian_core::surface::{
    analyze, fomenko_check, gauss_loops, maslov_class_hormander, maslov_via_beta, tangent_frames, SurfacePreset,
    Verdict,
};

fn max_residual(preset: &SurfacePreset) -> f64 {
    let grid = preset.build().unwrap();
    tangent_frames(&grid).unwrap().iter().map(|f| f.lagrangian_residual()).fold(0.0, f64::max)
}

#[test]
fn discrete_frames_are_lagrangian_to_second_order() {
    for preset in [SurfacePreset::random_graph(2, 1, 0), SurfacePreset::perturbed_torus(2, 4, 0)] {
        let coarse = max_residual(&preset.with_m(32));
        let fine = max_residual(&preset.with_m(64));
        assert!(coarse > 0.0);
        let constant = coarse / (2.0 * PI / 32.0f64).powi(2);
        let constant_fine = fine / (2.0 * PI / 64.0f64).powi(2);
        assert!(coarse / fine > 3.5, "{preset:?}: {coarse} → {fine}");
        assert!(constant_fine < 1.1 * constant, "C = {constant} then {constant_fine}");
    }
}

#[test]
fn d_beta_shrinks_under_refinement() {
    let preset = SurfacePreset::random_graph(2, 3, 0);
    let values: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&m| analyze(&preset.with_m(m).build().unwrap()).unwrap().max_abs_d_beta().unwrap())
        .collect();
    assert!(values[0] > values[1] * 1.8 && values[1] > values[2] * 1.8, "{values:?}");
}

#[test]
fn beta_periods_count_maslov_index() {
    for preset in
        [SurfacePreset::Circle { r: 1.0, m: 256 }, SurfacePreset::ProductTorus { radii: vec![1.0, 1.5], m: 256 }]
    {
        let grid = preset.build().unwrap();
        let data = analyze(&grid).unwrap();
        let indices: Vec<i64> = gauss_loops(&grid).unwrap().iter().map(|l| maslov_index(l).unwrap()).collect();
        for (beta, index) in maslov_via_beta(&data).unwrap().iter().zip(&indices) {
            assert!((beta - *index as f64).abs() < 0.05, "{preset:?}: {beta} vs {index}");
        }
    }
}

#[test]
fn hormander_route_matches_gauss_loops() {
    let mut presets = vec![
        SurfacePreset::Circle { r: 1.0, m: 128 },
        SurfacePreset::Circle { r: 0.3, m: 64 },
        SurfacePreset::ProductTorus { radii: vec![1.0, 2.0], m: 64 },
        SurfacePreset::ProductTorus { radii: vec![1.0, 1.0, 0.5], m: 24 },
        SurfacePreset::FlatPlane { n: 2, m: 32 },
        SurfacePreset::random_graph(2, 1, 64),
        SurfacePreset::random_graph(1, 2, 64),
    ];
    presets.extend((0..20).map(|seed| SurfacePreset::perturbed_torus(2, seed, 64)));
    for (i, preset) in presets.iter().enumerate() {
        let grid = preset.build().unwrap();
        for (axis, lp) in gauss_loops(&grid).unwrap().iter().enumerate() {
            let gauss = maslov_index(lp).unwrap();
            assert_eq!(gauss, preset.expected_maslov()[axis]);
            assert_eq!(maslov_class_hormander(&grid, axis, i as u64).unwrap(), gauss, "{preset:?}");
        }
    }
}

#[test]
fn minimal_immersions_are_lh() {
    let presets = [
        SurfacePreset::FlatPlane { n: 1, m: 16 },
        SurfacePreset::FlatPlane { n: 3, m: 8 },
        SurfacePreset::LagrangianGraph {
            n: 2,
            terms: vec![],
            quadratic: Some(vec![vec![0.5, 0.2], vec![0.2, -0.5]]),
            m: 32,
        },
    ];
    for preset in presets {
        let data = analyze(&preset.build().unwrap()).unwrap();
        assert!(data.periods.as_ref().unwrap().iter().all(|p| p.abs() < 1e-8), "{preset:?}");
        assert_eq!(data.lh_member(1e-4), Some(true));
    }
}

#[test]
fn relabelling_nodes_changes_nothing() {
    let grid = SurfacePreset::ProductTorus { radii: vec![1.0, 0.7], m: 64 }.build().unwrap();
    let moved = grid.rotated(&[5, 17]).unwrap();
    let a = analyze(&grid).unwrap();
    let b = analyze(&moved).unwrap();
    for (p, q) in a.periods.unwrap().iter().zip(b.periods.unwrap()) {
        assert!((p - q).abs() < 1e-9);
    }
    let ia: Vec<_> = gauss_loops(&grid).unwrap().iter().map(|l| maslov_index(l).unwrap()).collect();
    let ib: Vec<_> = gauss_loops(&moved).unwrap().iter().map(|l| maslov_index(l).unwrap()).collect();
    assert_eq!(ia, ib);

    // Shifting along axis 1 keeps the axis-1 generator line through node 0.
    let graph = SurfacePreset::random_graph(2, 2, 256).build().unwrap();
    let moved = graph.rotated(&[0, 40]).unwrap();
    let (a, b) = (analyze(&graph).unwrap(), analyze(&moved).unwrap());
    assert!((a.periods.as_ref().unwrap()[1] - b.periods.as_ref().unwrap()[1]).abs() < 1e-12);
    assert_eq!(a.lh_member(1e-4), Some(true));
    assert_eq!(b.lh_member(1e-4), Some(true));
    assert_eq!(maslov_class_hormander(&graph, 1, 0).unwrap(), maslov_class_hormander(&moved, 1, 0).unwrap());
}

#[test]
fn fomenko_reports() {
    let graph = fomenko_check(&SurfacePreset::random_graph(2, 1, 256).build().unwrap(), 0).unwrap();
    assert!(graph.lh_member);
    assert_eq!(graph.maslov_gauss, vec![0, 0]);
    assert_eq!(graph.maslov_hormander, vec![0, 0]);
    assert_eq!(graph.verdict, Verdict::Consistent);
    assert_eq!(graph.note, None);

    let torus =
        fomenko_check(&SurfacePreset::ProductTorus { radii: vec![1.0, 1.0], m: 64 }.build().unwrap(), 0).unwrap();
    assert!(!torus.lh_member);
    assert_eq!(torus.verdict, Verdict::Consistent);
    assert_eq!(torus.note.as_deref(), Some("not in LH"));
}
