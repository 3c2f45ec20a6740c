use lagrangian_core::cech::{
    build_cocycle, pairing, pullback_pairing, section_pair_suite, winding_difference, GoodCoverOnLoop, SectionOverLoop,
    WINDING_SIGN,
};
use lagrangian_core::{maslov_index, LoopPreset};

const GRID: usize = 256;

fn section(preset: &LoopPreset) -> SectionOverLoop {
    SectionOverLoop::from_preset(preset, GRID).unwrap()
}

fn cover(arcs: usize) -> GoodCoverOnLoop {
    GoodCoverOnLoop::uniform(arcs, 0.25, GRID).unwrap()
}

#[test]
fn rotating_line_pairing_ignores_the_cover() {
    let x = section(&LoopPreset::Horizontal { n: 1 });
    let y = section(&LoopPreset::RotatingLine { k: 1 });
    let mut values = Vec::new();
    for arcs in [4, 8, 16] {
        for seed in 0..5 {
            values.push(pairing(&x, &y, &cover(arcs), seed).unwrap());
        }
    }
    assert_eq!(values.len(), 15);
    assert!(values.iter().all(|&v| v == values[0]), "{values:?}");
}

#[test]
fn antisymmetry_and_vanishing_diagonal() {
    let c = cover(8);
    for (i, (px, py)) in section_pair_suite(20, 11).iter().enumerate() {
        let x = section(px);
        let y = section(py);
        let seed = i as u64;
        assert_eq!(pairing(&x, &y, &c, seed).unwrap(), -pairing(&y, &x, &c, seed).unwrap(), "{px:?} {py:?}");
        assert_eq!(pairing(&x, &x, &c, seed).unwrap(), 0);
        let cocycle = build_cocycle(&x, &y, &c, seed).unwrap();
        for a in 0..8 {
            assert_eq!(cocycle.value(a, (a + 1) % 8), cocycle.value((a + 1) % 8, a).map(|v| -v));
        }
    }
}

#[test]
fn pullback_multiplies_by_degree() {
    let x = section(&LoopPreset::Horizontal { n: 1 });
    let y = section(&LoopPreset::RotatingLine { k: 1 });
    let c = cover(8);
    let base = pairing(&x, &y, &c, 0).unwrap();
    assert_ne!(base, 0);
    for d in [-2, -1, 1, 2, 3] {
        assert_eq!(pullback_pairing(d, &x, &y, &c, 0).unwrap(), d * base);
    }
    let (px, py) = &section_pair_suite(3, 5)[1];
    let (x, y) = (section(px), section(py));
    let base = pairing(&x, &y, &c, 1).unwrap();
    assert_eq!(pullback_pairing(2, &x, &y, &c, 1).unwrap(), 2 * base);
}

#[test]
fn winding_oracle_pins_the_sign() {
    let c = cover(8);
    let mut nonzero = 0;
    for (i, (px, py)) in section_pair_suite(20, 11).iter().enumerate() {
        let x = section(px);
        let y = section(py);
        let p = pairing(&x, &y, &c, i as u64).unwrap();
        let lx = maslov_index(&x.as_loop().unwrap()).unwrap();
        let ly = maslov_index(&y.as_loop().unwrap()).unwrap();
        assert_eq!(p, WINDING_SIGN * (ly - lx), "{px:?} {py:?}");
        assert_eq!(p, winding_difference(&x, &y).unwrap());
        if ly != lx {
            nonzero += 1;
        }
    }
    // The suite must be able to detect a flipped sign.
    assert!(nonzero > 0);
}

#[test]
fn too_coarse_cover_is_reported() {
    // both lines sweep 0.625π per arc in opposite directions: nothing is transversal to both
    let x = section(&LoopPreset::RotatingLine { k: -2 });
    let y = section(&LoopPreset::RotatingLine { k: 2 });
    let err = pairing(&x, &y, &cover(4), 0).unwrap_err();
    assert!(matches!(err, lagrangian_core::Error::RetryExhausted { .. }), "{err:?}");
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn pairing_is_a_winding_difference(kx in -2i64..=2, ky in -2i64..=2, extra in 0usize..8, seed in any::<u64>()) {
            // Over one arc the two lines sweep (|kx| + |ky|)·1.25π/arcs; a
            // transversal line needs that to stay below π.
            let arcs = 2 * (kx.unsigned_abs() + ky.unsigned_abs()) as usize + 4 + extra;
            let x = section(&LoopPreset::RotatingLine { k: kx });
            let y = section(&LoopPreset::RotatingLine { k: ky });
            let c = cover(arcs);
            let value = pairing(&x, &y, &c, seed).unwrap();
            prop_assert_eq!(value, WINDING_SIGN * (ky - kx));
            prop_assert_eq!(pairing(&y, &x, &c, seed).unwrap(), -value);
        }
    }
}
