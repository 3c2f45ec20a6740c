//! Benchmark inputs shared by the criterion targets.

use lagrangian_core::{LagrangianFrame, LoopPreset, SurfacePreset, SymplecticSpace};

/// Five seeded random planes in `R^{2n}`.
pub fn planes(n: usize, seed: u64) -> [LagrangianFrame; 5] {
    let space = SymplecticSpace::new(n).expect("positive dimension");
    std::array::from_fn(|k| space.random_lagrangian(seed * 8 + k as u64))
}

pub fn random_loop(n: usize, twists: i64) -> LoopPreset {
    LoopPreset::InterpolatedRandom { n, seed: 7, twists }
}

pub fn torus(m: usize) -> SurfacePreset {
    SurfacePreset::ProductTorus { radii: vec![1.0, 1.0], m }
}
