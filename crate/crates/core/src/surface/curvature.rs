//! Tangent frames, mean curvature, the β form and its periods.
//!
//! Derivatives are central differences on the periodic grid. `β` is stored
//! as edge integrals (midpoint rule) and `dβ` as oriented plaquette sums,
//! so discrete Stokes holds exactly.

use nalgebra::{DMatrix, DVector, DVectorView};
use rayon::prelude::*;
use serde::Serialize;

use super::ImmersedLagrangianGrid;
use crate::error::{Error, Result};
use crate::linalg;
use crate::symplectic::LagrangianFrame;

/// Orthonormalized tangent frames `E` and coefficients `C = R⁻¹` with
/// `∂x = E·R`, so `e_i = Σ_a C_{ai} ∂_a x`.
#[derive(Debug, Clone)]
pub struct TangentField {
    dim: usize,
    k: usize,
    frames: Vec<f64>,
    coefficients: Vec<f64>,
}

impl TangentField {
    pub fn compute(grid: &ImmersedLagrangianGrid) -> Result<Self> {
        grid.require_periodic()?;
        let dim = grid.space().dim();
        let k = grid.k();
        let nodes = grid.nodes();
        let mut frames = vec![0.0; nodes * dim * k];
        let mut coefficients = vec![0.0; nodes * k * k];
        frames.par_chunks_mut(dim * k).zip(coefficients.par_chunks_mut(k * k)).enumerate().try_for_each(
            |(p, (e_out, c_out))| {
                let (e, c) = tangent_at(grid, p)?;
                e_out.copy_from_slice(e.as_slice());
                c_out.copy_from_slice(c.as_slice());
                Ok::<_, Error>(())
            },
        )?;
        Ok(Self { dim, k, frames, coefficients })
    }

    /// Orthonormal `2n × k` frame at `node`.
    pub fn frame(&self, node: usize) -> DMatrix<f64> {
        let len = self.dim * self.k;
        DMatrix::from_column_slice(self.dim, self.k, &self.frames[node * len..(node + 1) * len])
    }

    fn column(&self, node: usize, i: usize) -> DVectorView<'_, f64> {
        let start = node * self.dim * self.k + i * self.dim;
        DVectorView::from_slice(&self.frames[start..start + self.dim], self.dim)
    }

    fn coefficient(&self, node: usize, a: usize, i: usize) -> f64 {
        self.coefficients[node * self.k * self.k + i * self.k + a]
    }
}

/// Central-difference tangent matrix at `node`, orthonormalized.
pub(crate) fn tangent_at(grid: &ImmersedLagrangianGrid, node: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let dim = grid.space().dim();
    let k = grid.k();
    let mut t = DMatrix::zeros(dim, k);
    for a in 0..k {
        let d = (grid.displacement(node, a, 1) - grid.displacement(node, a, -1)) / (2.0 * grid.spacing(a));
        t.set_column(a, &d);
    }
    let rel = grid.space().tolerances().rank_rel;
    let e = linalg::orthonormalize(&t, rel)
        .ok_or(Error::RankDeficient { rank: linalg::numerical_rank(&t, rel), expected: k })?;
    let r = e.transpose() * &t;
    let c = r.try_inverse().ok_or(Error::RankDeficient { rank: linalg::numerical_rank(&t, rel), expected: k })?;
    Ok((e, c))
}

/// Tangent plane at every node, as raw central-difference frames.
pub fn tangent_frames(grid: &ImmersedLagrangianGrid) -> Result<Vec<LagrangianFrame>> {
    let field = TangentField::compute(grid)?;
    (0..grid.nodes()).map(|p| LagrangianFrame::new(*grid.space(), field.frame(p))).collect()
}

/// Oriented boundary sums of `β` over the plaquettes spanned by axes `a < b`,
/// indexed by the plaquette's lower corner.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaquetteSums {
    pub axes: (usize, usize),
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanCurvatureData {
    /// Mean curvature vector, `2n` entries per node.
    pub h: Vec<f64>,
    /// `β` edge integrals: `beta[a][p]` is the edge from `p` to `p + e_a`.
    pub beta: Option<Vec<Vec<f64>>>,
    /// Sum of `β` along the grid line of each axis through node 0.
    pub periods: Option<Vec<f64>>,
    /// Length of the same grid lines.
    pub generator_lengths: Option<Vec<f64>>,
    pub d_beta: Option<Vec<PlaquetteSums>>,
    dim: usize,
}

impl MeanCurvatureData {
    pub fn h_at(&self, node: usize) -> DVectorView<'_, f64> {
        DVectorView::from_slice(&self.h[node * self.dim..(node + 1) * self.dim], self.dim)
    }

    /// `α_H(v) = g(H, v)`.
    pub fn alpha_h(&self, node: usize, v: &DVector<f64>) -> f64 {
        self.h_at(node).dot(v)
    }

    /// `β` on the edge from `node` one step along `axis`, in either direction.
    pub fn beta_edge(&self, grid: &ImmersedLagrangianGrid, node: usize, axis: usize, step: isize) -> Option<f64> {
        let beta = self.beta.as_ref()?;
        match step {
            1 => Some(beta[axis][node]),
            -1 => Some(-beta[axis][grid.neighbor(node, axis, -1).0]),
            _ => None,
        }
    }

    pub fn max_abs_d_beta(&self) -> Option<f64> {
        let sums = self.d_beta.as_ref()?;
        Some(sums.iter().flat_map(|s| s.values.iter()).fold(0.0, |acc, v| acc.max(v.abs())))
    }

    /// `|period_a| < lh_rel · length_a` on every generator.
    pub fn lh_member(&self, lh_rel: f64) -> Option<bool> {
        let periods = self.periods.as_ref()?;
        let lengths = self.generator_lengths.as_ref()?;
        Some(periods.iter().zip(lengths).all(|(p, l)| p.abs() < lh_rel * l))
    }
}

/// `H = (I − EEᵀ) Σ_i ∂_{e_i} e_i` at every node.
pub fn mean_curvature(grid: &ImmersedLagrangianGrid) -> Result<MeanCurvatureData> {
    let field = TangentField::compute(grid)?;
    Ok(mean_curvature_from(grid, &field))
}

fn mean_curvature_from(grid: &ImmersedLagrangianGrid, field: &TangentField) -> MeanCurvatureData {
    let dim = grid.space().dim();
    let k = grid.k();
    let mut h = vec![0.0; grid.nodes() * dim];
    h.par_chunks_mut(dim).enumerate().for_each(|(p, out)| {
        let mut v = DVector::zeros(dim);
        for a in 0..k {
            let (fwd, _) = grid.neighbor(p, a, 1);
            let (bwd, _) = grid.neighbor(p, a, -1);
            let scale = 1.0 / (2.0 * grid.spacing(a));
            for i in 0..k {
                let c = field.coefficient(p, a, i) * scale;
                v.axpy(c, &field.column(fwd, i), 1.0);
                v.axpy(-c, &field.column(bwd, i), 1.0);
            }
        }
        let e = field.frame(p);
        let normal = &v - &e * (e.transpose() * &v);
        out.copy_from_slice(normal.as_slice());
    });
    MeanCurvatureData { h, beta: None, periods: None, generator_lengths: None, d_beta: None, dim }
}

/// `β(v) = g(H, Jv)`, stored as midpoint-rule edge integrals.
pub fn beta_form(grid: &ImmersedLagrangianGrid, mut data: MeanCurvatureData) -> MeanCurvatureData {
    let space = grid.space();
    // β(v) = g(H, Jv) = g(−JH, v).
    let covector = |p: usize| -space.apply_j(&data.h_at(p).clone_owned());
    let beta = (0..grid.k())
        .map(|a| {
            (0..grid.nodes())
                .into_par_iter()
                .map(|p| {
                    let (q, _) = grid.neighbor(p, a, 1);
                    let mid = (covector(p) + covector(q)) * 0.5;
                    mid.dot(&grid.displacement(p, a, 1))
                })
                .collect()
        })
        .collect();
    data.beta = Some(beta);
    data
}

/// Periods along the generators through node 0 and `dβ` on every plaquette.
pub fn periods_and_dbeta(grid: &ImmersedLagrangianGrid, mut data: MeanCurvatureData) -> Result<MeanCurvatureData> {
    let beta = data.beta.as_ref().ok_or_else(|| Error::InvalidInput("β must be computed before its periods".into()))?;
    let k = grid.k();
    let mut periods = Vec::with_capacity(k);
    let mut lengths = Vec::with_capacity(k);
    for (a, edges) in beta.iter().enumerate() {
        let line = (0..grid.shape()[a]).map(|i| i * grid.stride(a));
        periods.push(line.clone().map(|p| edges[p]).sum());
        lengths.push(line.map(|p| grid.displacement(p, a, 1).norm()).sum());
    }
    let mut d_beta = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            let values = (0..grid.nodes())
                .into_par_iter()
                .map(|p| {
                    let pa = grid.neighbor(p, a, 1).0;
                    let pb = grid.neighbor(p, b, 1).0;
                    (beta[a][p] - beta[a][pb]) + (beta[b][pa] - beta[b][p])
                })
                .collect();
            d_beta.push(PlaquetteSums { axes: (a, b), values });
        }
    }
    data.periods = Some(periods);
    data.generator_lengths = Some(lengths);
    data.d_beta = Some(d_beta);
    Ok(data)
}

/// The full pipeline: `H`, `β`, periods and `dβ`.
pub fn analyze(grid: &ImmersedLagrangianGrid) -> Result<MeanCurvatureData> {
    let data = mean_curvature(grid)?;
    periods_and_dbeta(grid, beta_form(grid, data))
}
