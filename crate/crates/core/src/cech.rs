//! Hörmander cocycles over a good cover of a loop.
//!
//! The base is the parameter circle `[0, 1)`, the bundle is the trivial
//! `S¹ × R^{2n}`, and sections are sampled on a common periodic grid. For each
//! arc `U_α` a constant plane `Z_α` transversal to both sections on the arc
//! is chosen, and the edge value `σ(α, α+1) = (X, Y, Z_α, Z_{α+1})` is
//! evaluated at every grid point of the overlap.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hormander::{hormander_index, LagrangianQuadruple};
use crate::linalg;
use crate::maslov::{maslov_index, LagrangianLoop, LoopPreset};
use crate::symplectic::{stream_rng, FrameRecord, LagrangianFrame, SymplecticSpace};
use crate::tolerance::Tolerances;

/// Candidates tried per arc before giving up.
pub const MAX_CANDIDATES: usize = 1000;

/// Sign `s` in `pairing(X, Y) = s·(ℓ(Y) − ℓ(X))` for the conventions of this
/// crate; pinned by the rotating-line calibration in the tests.
pub const WINDING_SIGN: i64 = -1;

/// A periodic family of planes sampled at `t_j = j / N`, `j = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionOverLoop {
    samples: Vec<LagrangianFrame>,
}

impl SectionOverLoop {
    pub fn new(samples: Vec<LagrangianFrame>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidInput("a section needs at least 3 samples".into()));
        }
        for s in &samples[1..] {
            samples[0].check_same_space(s)?;
        }
        Ok(Self { samples })
    }

    pub fn from_fn(grid: usize, f: impl Fn(f64) -> LagrangianFrame) -> Result<Self> {
        Self::new((0..grid).map(|j| f(j as f64 / grid as f64)).collect())
    }

    pub fn from_preset(preset: &LoopPreset, grid: usize) -> Result<Self> {
        let sampler = preset.sampler()?;
        Self::from_fn(grid, |t| sampler.at(t))
    }

    pub fn constant(plane: LagrangianFrame, grid: usize) -> Result<Self> {
        Self::new(vec![plane; grid])
    }

    pub fn samples(&self) -> &[LagrangianFrame] {
        &self.samples
    }

    pub fn grid(&self) -> usize {
        self.samples.len()
    }

    pub fn space(&self) -> &SymplecticSpace {
        self.samples[0].space()
    }

    /// The section precomposed with `t ↦ d·t mod 1`.
    pub fn pullback(&self, degree: i64) -> Self {
        let grid = self.grid() as i64;
        let samples = (0..grid).map(|j| self.samples[(degree * j).rem_euclid(grid) as usize].clone()).collect();
        Self { samples }
    }

    /// The closed loop traced by the section.
    pub fn as_loop(&self) -> Result<LagrangianLoop> {
        LagrangianLoop::from_periodic(self.samples.clone())
    }

    pub fn with_tolerances(self, tol: Tolerances) -> Self {
        let space = self.space().with_tolerances(tol);
        Self { samples: self.samples.into_iter().map(|s| s.with_space(space)).collect() }
    }
}

/// JSON shape of a sampled section: one period, no closing sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectionRecord {
    pub n: usize,
    pub samples: Vec<Vec<Vec<f64>>>,
}

impl SectionRecord {
    pub fn into_section(self, tol: Tolerances) -> Result<SectionOverLoop> {
        let n = self.n;
        let frames = self
            .samples
            .into_iter()
            .map(|basis| FrameRecord { n, basis }.into_frame(tol))
            .collect::<Result<Vec<_>>>()?;
        SectionOverLoop::new(frames)
    }
}

impl From<&SectionOverLoop> for SectionRecord {
    fn from(section: &SectionOverLoop) -> Self {
        SectionRecord {
            n: section.space().n(),
            samples: section.samples.iter().map(|s| FrameRecord::from(s).basis).collect(),
        }
    }
}

/// `m` arcs around the parameter circle, arc `α` covering
/// `[α/m − δ, (α+1)/m + δ]` with `δ = overlap_fraction / (2m)`.
///
/// Consecutive arcs overlap in one interval and no three arcs meet, so the
/// nerve is the cycle `0 → 1 → … → m−1 → 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodCoverOnLoop {
    m: usize,
    overlap_fraction: f64,
    grid: usize,
    arc_samples: Vec<Vec<usize>>,
    overlap_samples: Vec<Vec<usize>>,
}

impl GoodCoverOnLoop {
    pub fn uniform(m: usize, overlap_fraction: f64, grid: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidInput("a good cover of a circle needs at least 3 arcs".into()));
        }
        if !(overlap_fraction > 0.0 && overlap_fraction < 1.0) {
            return Err(Error::InvalidInput("overlap_fraction must lie in (0, 1)".into()));
        }
        // Work in units of 1/(m·grid) so membership is exact integer arithmetic.
        let half = overlap_fraction * grid as f64 / 2.0;
        // Grid points of `[lo, hi]` (in units of `1/(m·grid)`), listed in path order.
        let window = |lo: f64, hi: f64| -> Vec<usize> {
            let first = ((lo - 1e-9) / m as f64).ceil() as i64;
            let last = ((hi + 1e-9) / m as f64).floor() as i64;
            (first..=last).map(|j| j.rem_euclid(grid as i64) as usize).collect()
        };
        let arc_samples: Vec<Vec<usize>> =
            (0..m).map(|a| window((a * grid) as f64 - half, ((a + 1) * grid) as f64 + half)).collect();
        let overlap_samples: Vec<Vec<usize>> = (0..m)
            .map(|a| {
                let centre = ((a + 1) * grid) as f64;
                window(centre - half, centre + half)
            })
            .collect();
        if let Some(a) = overlap_samples.iter().position(|s| s.len() < 2) {
            return Err(Error::InvalidInput(format!(
                "overlap of arcs {a} and {} holds fewer than two grid samples; refine the grid",
                (a + 1) % m
            )));
        }
        Ok(Self { m, overlap_fraction, grid, arc_samples, overlap_samples })
    }

    pub fn arcs(&self) -> usize {
        self.m
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Parameter interval `(start, end)` of arc `α`; `start` may be negative.
    pub fn arc(&self, alpha: usize) -> (f64, f64) {
        let delta = self.overlap_fraction / (2.0 * self.m as f64);
        (alpha as f64 / self.m as f64 - delta, (alpha + 1) as f64 / self.m as f64 + delta)
    }

    pub fn arc_samples(&self, alpha: usize) -> &[usize] {
        &self.arc_samples[alpha]
    }

    /// Grid indices in `U_α ∩ U_{α+1}`.
    pub fn overlap_samples(&self, alpha: usize) -> &[usize] {
        &self.overlap_samples[alpha]
    }

    fn check_section(&self, section: &SectionOverLoop) -> Result<()> {
        if section.grid() != self.grid {
            return Err(Error::DimensionMismatch(format!(
                "section has {} samples, cover expects {}",
                section.grid(),
                self.grid
            )));
        }
        Ok(())
    }
}

/// Integer values on the oriented nerve edges `α → α+1` of a cyclic cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CechCocycle {
    pub values: Vec<i64>,
}

impl CechCocycle {
    /// `σ(α, β)` for adjacent arcs; antisymmetric under edge reversal.
    pub fn value(&self, alpha: usize, beta: usize) -> Option<i64> {
        let m = self.values.len();
        if (alpha + 1) % m == beta {
            Some(self.values[alpha])
        } else if (beta + 1) % m == alpha {
            Some(-self.values[beta])
        } else {
            None
        }
    }
}

/// One constant plane per arc, transversal to both sections on the arc.
///
/// Candidates for arc `α` come from the random stream `(seed, α)`, so the
/// result does not depend on the order in which arcs are processed.
pub fn choose_transversal_sections(
    x: &SectionOverLoop,
    y: &SectionOverLoop,
    cover: &GoodCoverOnLoop,
    seed: u64,
) -> Result<Vec<LagrangianFrame>> {
    x.samples[0].check_same_space(&y.samples[0])?;
    cover.check_section(x)?;
    cover.check_section(y)?;
    let space = *x.space();
    let margin = space.tolerances().transversal_margin;
    let qx: Vec<_> = x.samples.iter().map(LagrangianFrame::orthonormal_basis).collect();
    let qy: Vec<_> = y.samples.iter().map(LagrangianFrame::orthonormal_basis).collect();

    (0..cover.arcs())
        .into_par_iter()
        .map(|alpha| {
            let mut rng = stream_rng(seed, alpha as u64);
            for _ in 0..MAX_CANDIDATES {
                let candidate = space.random_lagrangian_with(&mut rng);
                let qz = candidate.orthonormal_basis();
                let arc = cover.arc_samples(alpha);
                let ok = arc.iter().all(|&j| {
                    linalg::transversality_margin(&qz, &qx[j]) >= margin
                        && linalg::transversality_margin(&qz, &qy[j]) >= margin
                }) && stays_transversal(&qz, &qx, arc)
                    && stays_transversal(&qz, &qy, arc);
                if ok {
                    return Ok(candidate);
                }
            }
            Err(Error::RetryExhausted { arc: alpha, attempts: MAX_CANDIDATES })
        })
        .collect()
}

/// Sampled margins cannot see a section sweeping through `Z` between two
/// grid points. With the frames carried continuously along the arc,
/// `det[Z | Q_j]` keeps its sign exactly when no such crossing happens.
fn stays_transversal(qz: &DMatrix<f64>, frames: &[DMatrix<f64>], arc: &[usize]) -> bool {
    let n2 = qz.nrows();
    let n = qz.ncols();
    let mut joined = DMatrix::zeros(n2, 2 * n);
    joined.columns_mut(0, n).copy_from(qz);
    let mut previous: Option<DMatrix<f64>> = None;
    let mut sign = 0.0;
    for &j in arc {
        let mut q = frames[j].clone();
        if let Some(prev) = &previous {
            if (prev.transpose() * &q).determinant() < 0.0 {
                q.column_mut(0).neg_mut();
            }
        }
        joined.columns_mut(n, n).copy_from(&q);
        let det = joined.determinant();
        if sign == 0.0 {
            sign = det.signum();
        } else if det.signum() != sign {
            return false;
        }
        previous = Some(q);
    }
    true
}

/// `σ(α, α+1) = (X(t), Y(t), Z_α, Z_{α+1})`, checked to be constant over
/// every grid point `t` of the overlap.
pub fn build_cocycle(
    x: &SectionOverLoop,
    y: &SectionOverLoop,
    cover: &GoodCoverOnLoop,
    seed: u64,
) -> Result<CechCocycle> {
    let planes = choose_transversal_sections(x, y, cover, seed)?;
    let m = cover.arcs();
    let values = (0..m)
        .into_par_iter()
        .map(|alpha| {
            let beta = (alpha + 1) % m;
            let mut value = None;
            for &j in cover.overlap_samples(alpha) {
                let quad = LagrangianQuadruple::new(
                    x.samples[j].clone(),
                    y.samples[j].clone(),
                    planes[alpha].clone(),
                    planes[beta].clone(),
                )?;
                let here = hormander_index(&quad)?;
                match value {
                    None => value = Some(here),
                    Some(v) if v != here => return Err(Error::InconsistentOverlap { from: alpha, to: beta }),
                    Some(_) => {}
                }
            }
            Ok(value.expect("overlaps hold at least two samples"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CechCocycle { values })
}

/// Evaluation on the fundamental cycle `Σ (α → α+1)`.
pub fn pair_with_fundamental_cycle(cocycle: &CechCocycle) -> i64 {
    cocycle.values.iter().sum()
}

/// Pairing of the Hörmander class of `(X, Y)` with the loop.
pub fn pairing(x: &SectionOverLoop, y: &SectionOverLoop, cover: &GoodCoverOnLoop, seed: u64) -> Result<i64> {
    Ok(pair_with_fundamental_cycle(&build_cocycle(x, y, cover, seed)?))
}

/// Pairing of the class pulled back along the degree-`d` map `t ↦ d·t`.
pub fn pullback_pairing(
    degree: i64,
    x: &SectionOverLoop,
    y: &SectionOverLoop,
    cover: &GoodCoverOnLoop,
    seed: u64,
) -> Result<i64> {
    if degree == 0 {
        return Err(Error::InvalidInput("pullback degree must be nonzero".into()));
    }
    pairing(&x.pullback(degree), &y.pullback(degree), cover, seed)
}

/// `s·(ℓ(Y) − ℓ(X))`, the value the pairing must take.
pub fn winding_difference(x: &SectionOverLoop, y: &SectionOverLoop) -> Result<i64> {
    Ok(WINDING_SIGN * (maslov_index(&y.as_loop()?)? - maslov_index(&x.as_loop()?)?))
}

/// Seeded pairs `(X, Y)` of section presets in a common `R^{2n}`: rotating
/// lines, the circle, constants and smooth random loops.
pub fn section_pair_suite(count: usize, seed: u64) -> Vec<(LoopPreset, LoopPreset)> {
    use rand::Rng;
    let mut rng = stream_rng(seed, 4);
    (0..count)
        .map(|i| {
            let n = 1 + i % 3;
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| match (n, rng.random_range(0..3)) {
                (1, 0) => LoopPreset::RotatingLine { k: rng.random_range(-3..=3) },
                (1, 1) => LoopPreset::Circle,
                (_, 0) => LoopPreset::Constant { n, seed: rng.random() },
                _ => LoopPreset::InterpolatedRandom { n, seed: rng.random(), twists: rng.random_range(-2..=2) },
            };
            let x = pick(&mut rng);
            let y = pick(&mut rng);
            (x, y)
        })
        .collect()
}
