use serde::{Deserialize, Serialize};

/// Numerical thresholds used across the crate.
///
/// Every field is an absolute threshold except `rank_rel` and
/// `degenerate_rel`, which are relative to the largest singular value or
/// eigenvalue of the matrix being tested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max |entry| of `basisᵀ·ω·basis` after column normalization.
    pub isotropy: f64,
    /// Max |entry| of `U*·U − I`.
    pub unitarity: f64,
    /// Singular values below `rank_rel · σ_max` count as zero.
    pub rank_rel: f64,
    /// Largest principal angle allowed between the ends of a closed loop.
    pub closure_angle: f64,
    /// Allowed deviation of a total winding (in turns) from an integer.
    pub winding_integrality: f64,
    /// Eigenvalues below `degenerate_rel · max|λ|` make a form degenerate.
    pub degenerate_rel: f64,
    /// Singular values of `(I − P_X)·Y` below this count as `X ∩ Y`.
    pub intersection: f64,
    /// Minimum smallest singular value of `[Z | X]` (orthonormal blocks)
    /// accepted when searching for a transversal plane.
    pub transversal_margin: f64,
    /// LH verdict: |period| must be below `lh_rel` times the generator length.
    pub lh_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            isotropy: 1e-8,
            unitarity: 1e-8,
            rank_rel: 1e-10,
            closure_angle: 1e-6,
            winding_integrality: 1e-6,
            degenerate_rel: 1e-8,
            intersection: 1e-10,
            transversal_margin: 1e-3,
            lh_rel: 1e-4,
        }
    }
}

impl Tolerances {
    /// All thresholds multiplied by `factor`, for convergence studies.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            isotropy: self.isotropy * factor,
            unitarity: self.unitarity * factor,
            rank_rel: self.rank_rel * factor,
            closure_angle: self.closure_angle * factor,
            winding_integrality: self.winding_integrality * factor,
            degenerate_rel: self.degenerate_rel * factor,
            intersection: self.intersection * factor,
            transversal_margin: self.transversal_margin * factor,
            lh_rel: self.lh_rel * factor,
        }
    }
}
