//! Discretized Lagrangian immersions of tori in flat `C^n` and `T*T^n`.
//!
//! An immersion is sampled on a periodic `k`-dimensional grid (`k = n`)
//! over the parameter domain `[0, 2π)^k`. Positions live in `R^{2n}` with
//! coordinates `(x, y)`. For immersions into `T*T^n`, stepping across the
//! seam of axis `a` adds a lattice translation `τ_a` to the position.

mod classes;
mod curvature;
mod presets;

pub use classes::{
    fomenko_check, gauss_loops, gauss_section, maslov_class_hormander, maslov_via_beta, FomenkoReport, Verdict,
    MASLOV_CLASS_SIGN,
};
pub use curvature::{
    analyze, beta_form, mean_curvature, periods_and_dbeta, tangent_frames, MeanCurvatureData, PlaquetteSums,
    TangentField,
};
pub use presets::{SurfacePreset, TrigPolynomial, TrigTerm};

use std::f64::consts::PI;

use nalgebra::{DVector, DVectorView};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{LagrangianFrame, SymplecticSpace};
use crate::tolerance::Tolerances;

/// Sampled immersion `N → R^{2n}` on a grid with `shape[a]` nodes along axis `a`.
///
/// Nodes are stored with axis 0 varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct ImmersedLagrangianGrid {
    space: SymplecticSpace,
    shape: Vec<usize>,
    strides: Vec<usize>,
    periodic: Vec<bool>,
    positions: Vec<f64>,
    translations: Vec<DVector<f64>>,
}

impl ImmersedLagrangianGrid {
    /// `positions` holds `2n` coordinates per node; `translations[a]` is
    /// added when crossing the seam of axis `a` (zero for closed tori).
    pub fn new(
        space: SymplecticSpace,
        shape: Vec<usize>,
        periodic: Vec<bool>,
        positions: Vec<f64>,
        translations: Vec<DVector<f64>>,
    ) -> Result<Self> {
        let n = space.n();
        let dim = space.dim();
        if shape.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "a Lagrangian immersion into R^{dim} has {n} parameters, got {}",
                shape.len()
            )));
        }
        if periodic.len() != n || translations.len() != n {
            return Err(Error::DimensionMismatch("one periodic flag and one translation per axis".into()));
        }
        if let Some(t) = translations.iter().find(|t| t.len() != dim) {
            return Err(Error::DimensionMismatch(format!("translation of length {}, expected {dim}", t.len())));
        }
        if shape.iter().any(|&s| s < 3) {
            return Err(Error::InvalidInput("every axis needs at least 3 nodes".into()));
        }
        let nodes: usize = shape.iter().product();
        if positions.len() != nodes * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for {nodes} nodes in R^{dim}",
                positions.len()
            )));
        }
        if positions.iter().chain(translations.iter().flat_map(|t| t.iter())).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("positions must be finite".into()));
        }
        let mut strides = vec![1; n];
        for a in (0..n.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * shape[a + 1];
        }
        Ok(Self { space, shape, strides, periodic, positions, translations })
    }

    /// Build by evaluating `f` at the parameter `θ ∈ [0, 2π)^n` of every node.
    pub fn from_fn(
        space: SymplecticSpace,
        shape: Vec<usize>,
        translations: Vec<DVector<f64>>,
        f: impl Fn(&[f64]) -> DVector<f64> + Sync,
    ) -> Result<Self> {
        use rayon::prelude::*;
        let dim = space.dim();
        let k = shape.len();
        let nodes: usize = shape.iter().product();
        let mut positions = vec![0.0; nodes * dim];
        positions.par_chunks_mut(dim.max(1)).enumerate().for_each(|(p, out)| {
            let mut rest = p;
            let mut theta = vec![0.0; k];
            for a in (0..k).rev() {
                theta[a] = 2.0 * PI * (rest % shape[a]) as f64 / shape[a] as f64;
                rest /= shape[a];
            }
            out.copy_from_slice(f(&theta).as_slice());
        });
        Self::new(space, shape, vec![true; k], positions, translations)
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    /// Intrinsic dimension `k`.
    pub fn k(&self) -> usize {
        self.shape.len()
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn translations(&self) -> &[DVector<f64>] {
        &self.translations
    }

    pub fn nodes(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// Parameter spacing `h_a = 2π / N_a`.
    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * PI / self.shape[axis] as f64
    }

    pub fn position(&self, node: usize) -> DVectorView<'_, f64> {
        let dim = self.space.dim();
        DVectorView::from_slice(&self.positions[node * dim..(node + 1) * dim], dim)
    }

    /// Index of `node` along `axis`.
    pub fn coordinate(&self, node: usize, axis: usize) -> usize {
        (node / self.strides[axis]) % self.shape[axis]
    }

    /// The node `step` places away along `axis`, with the number of seams
    /// crossed (signed).
    pub fn neighbor(&self, node: usize, axis: usize, step: isize) -> (usize, isize) {
        let len = self.shape[axis] as isize;
        let i = self.coordinate(node, axis) as isize;
        let j = i + step;
        let wraps = j.div_euclid(len);
        let j = j.rem_euclid(len);
        let moved = (node as isize + (j - i) * self.strides[axis] as isize) as usize;
        (moved, wraps)
    }

    /// `x(neighbor) − x(node)` including lattice translations.
    pub fn displacement(&self, node: usize, axis: usize, step: isize) -> DVector<f64> {
        let (other, wraps) = self.neighbor(node, axis, step);
        let mut d = self.position(other) - self.position(node);
        if wraps != 0 {
            d.axpy(wraps as f64, &self.translations[axis], 1.0);
        }
        d
    }

    /// Fails unless every axis closes up; curvature data uses central
    /// differences only.
    pub fn require_periodic(&self) -> Result<()> {
        if self.periodic.iter().all(|&p| p) {
            Ok(())
        } else {
            Err(Error::InvalidInput("curvature data needs a grid periodic in every direction".into()))
        }
    }

    /// The same immersion with node labels shifted by `shifts[a]` along each axis.
    pub fn rotated(&self, shifts: &[usize]) -> Result<Self> {
        if shifts.len() != self.k() {
            return Err(Error::DimensionMismatch("one shift per axis".into()));
        }
        let dim = self.space.dim();
        let mut positions = vec![0.0; self.positions.len()];
        for p in 0..self.nodes() {
            let mut source = p;
            let mut wraps = vec![0isize; self.k()];
            for (a, &s) in shifts.iter().enumerate() {
                let (q, w) = self.neighbor(source, a, s as isize);
                source = q;
                wraps[a] = w;
            }
            let mut x = self.position(source).clone_owned();
            for (a, &w) in wraps.iter().enumerate() {
                if w != 0 {
                    x.axpy(w as f64, &self.translations[a], 1.0);
                }
            }
            positions[p * dim..(p + 1) * dim].copy_from_slice(x.as_slice());
        }
        Self::new(self.space, self.shape.clone(), self.periodic.clone(), positions, self.translations.clone())
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.space = self.space.with_tolerances(tol);
        self
    }

    /// The vertical plane `0 ⊕ R^n` of the ambient space.
    pub fn vertical_section(&self) -> LagrangianFrame {
        self.space.vertical()
    }
}

/// Nested JSON arrays of positions: depth `k`, leaves of length `2n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NestedPositions {
    Leaf(Vec<f64>),
    Branch(Vec<NestedPositions>),
}

/// JSON form of a custom immersion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImmersionRecord {
    pub k: usize,
    pub n: usize,
    pub periodic: Vec<bool>,
    pub positions: NestedPositions,
    /// Per-axis seam translations; zero when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translations: Option<Vec<Vec<f64>>>,
}

impl ImmersionRecord {
    pub fn into_grid(self, tol: Tolerances) -> Result<ImmersedLagrangianGrid> {
        if self.k != self.n {
            return Err(Error::DimensionMismatch(format!("k = {} must equal n = {}", self.k, self.n)));
        }
        let space = SymplecticSpace::new(self.n)?.with_tolerances(tol);
        let mut shape = Vec::new();
        let mut flat = Vec::new();
        flatten(&self.positions, 0, self.k, &mut shape, &mut flat)?;
        let translations = match self.translations {
            Some(t) => t.into_iter().map(DVector::from_vec).collect(),
            None => vec![DVector::zeros(space.dim()); self.k],
        };
        ImmersedLagrangianGrid::new(space, shape, self.periodic, flat, translations)
    }
}

fn flatten(node: &NestedPositions, depth: usize, k: usize, shape: &mut Vec<usize>, out: &mut Vec<f64>) -> Result<()> {
    match node {
        NestedPositions::Leaf(x) if depth == k => {
            out.extend_from_slice(x);
            Ok(())
        }
        NestedPositions::Branch(children) if depth < k => {
            if shape.len() == depth {
                shape.push(children.len());
            } else if shape[depth] != children.len() {
                return Err(Error::DimensionMismatch("ragged position array".into()));
            }
            children.iter().try_for_each(|c| flatten(c, depth + 1, k, shape, out))
        }
        _ => Err(Error::DimensionMismatch(format!("position array must be nested {k} levels deep"))),
    }
}

impl From<&ImmersedLagrangianGrid> for ImmersionRecord {
    fn from(grid: &ImmersedLagrangianGrid) -> Self {
        fn build(grid: &ImmersedLagrangianGrid, axis: usize, base: usize) -> NestedPositions {
            if axis == grid.k() {
                return NestedPositions::Leaf(grid.position(base).iter().copied().collect());
            }
            NestedPositions::Branch(
                (0..grid.shape[axis]).map(|i| build(grid, axis + 1, base + i * grid.strides[axis])).collect(),
            )
        }
        Self {
            k: grid.k(),
            n: grid.n(),
            periodic: grid.periodic.clone(),
            positions: build(grid, 0, 0),
            translations: Some(grid.translations.iter().map(|t| t.iter().copied().collect()).collect()),
        }
    }
}
