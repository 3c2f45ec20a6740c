//! Maslov index of closed loops of Lagrangian planes.
//!
//! The index is the winding number of `det²` along the loop, computed by
//! summing principal-branch phase increments between consecutive samples.
//! Counterclockwise phase increase counts as positive, so the line
//! `t ↦ span(cos πt, sin πt)` has index `+1`.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::symplectic::{stream_rng, FrameRecord, LagrangianFrame, SymplecticSpace};
use crate::tolerance::Tolerances;

/// A closed sampled path of Lagrangian planes.
///
/// Holds `m + 1` samples where the last one repeats the first plane, so
/// there are `m` segments.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianLoop {
    samples: Vec<LagrangianFrame>,
}

impl LagrangianLoop {
    /// Build from explicitly closed samples (last plane equal to the first).
    pub fn new(samples: Vec<LagrangianFrame>) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::InvalidInput(format!(
                "a loop needs at least 3 segments, got {} samples",
                samples.len()
            )));
        }
        let first = &samples[0];
        for s in &samples[1..] {
            first.check_same_space(s)?;
        }
        let last = samples.last().expect("non-empty");
        let angle = first.distance(last)?.asin();
        if angle > first.space().tolerances().closure_angle {
            return Err(Error::NotClosed { angle });
        }
        Ok(Self { samples })
    }

    /// Build from one period of samples; the first plane is appended to close the loop.
    pub fn from_periodic(mut samples: Vec<LagrangianFrame>) -> Result<Self> {
        if let Some(first) = samples.first().cloned() {
            samples.push(first);
        }
        Self::new(samples)
    }

    /// Sample `path` at `t = j/m`, `j = 0..m`, and close the loop.
    pub fn sample<F>(m: usize, path: F) -> Result<Self>
    where
        F: Fn(f64) -> LagrangianFrame,
    {
        Self::from_periodic((0..m).map(|j| path(j as f64 / m as f64)).collect())
    }

    pub fn samples(&self) -> &[LagrangianFrame] {
        &self.samples
    }

    pub fn segments(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn space(&self) -> &SymplecticSpace {
        self.samples[0].space()
    }

    /// The same loop traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut samples = self.samples.clone();
        samples.reverse();
        Self { samples }
    }

    /// The same loop started at sample `shift`.
    pub fn rotated(&self, shift: usize) -> Self {
        let m = self.segments();
        let period = &self.samples[..m];
        let mut samples: Vec<_> = (0..m).map(|j| period[(j + shift) % m].clone()).collect();
        samples.push(samples[0].clone());
        Self { samples }
    }

    /// Traverse `self` and then `other`; both must start at the same plane.
    pub fn concat(&self, other: &LagrangianLoop) -> Result<Self> {
        let angle = self.samples[0].distance(&other.samples[0])?.asin();
        if angle > self.space().tolerances().closure_angle {
            return Err(Error::InvalidInput("loops do not share a base plane".into()));
        }
        let mut samples = self.samples.clone();
        samples.extend(other.samples[1..].iter().cloned());
        Ok(Self { samples })
    }

    pub fn with_tolerances(self, tol: Tolerances) -> Self {
        let space = self.space().with_tolerances(tol);
        Self { samples: self.samples.into_iter().map(|s| s.with_space(space)).collect() }
    }
}

/// `det²` at every sample.
pub fn det_squared_samples(lp: &LagrangianLoop) -> Result<Vec<Complex<f64>>> {
    lp.samples.iter().map(LagrangianFrame::det_squared).collect()
}

/// Principal-branch phase increments of `det²` along each segment.
pub fn phase_increments(lp: &LagrangianLoop) -> Result<Vec<f64>> {
    let dets = det_squared_samples(lp)?;
    dets.windows(2)
        .enumerate()
        .map(|(segment, w)| {
            let increment = (w[1] * w[0].conj()).arg();
            if increment.abs() >= PI / 2.0 {
                Err(Error::Undersampled { segment, increment })
            } else {
                Ok(increment)
            }
        })
        .collect()
}

/// Winding number of `det²` along the loop.
pub fn maslov_index(lp: &LagrangianLoop) -> Result<i64> {
    let total: f64 = phase_increments(lp)?.iter().sum();
    let turns = total / (2.0 * PI);
    let index = turns.round();
    let defect = (turns - index).abs();
    if defect > lp.space().tolerances().winding_integrality {
        return Err(Error::NotClosed { angle: defect * 2.0 * PI });
    }
    Ok(index as i64)
}

/// Orthogonal `O` minimizing `‖U_m·O − U_0‖` after transporting a unitary
/// representative along the loop.
///
/// Each step aligns the next representative to the previous one by the
/// orthogonal Procrustes solution (polar factor of `Re(V*·U)`).
pub fn closing_holonomy(lp: &LagrangianLoop) -> Result<DMatrix<f64>> {
    phase_increments(lp)?;
    let tie = lp.space().tolerances().degenerate_rel;
    let start = lp.samples[0].to_unitary()?.u;
    let mut current = start.clone();
    for (segment, frame) in lp.samples.iter().enumerate().skip(1) {
        let next = frame.to_unitary()?.u;
        let (align, smallest) = procrustes(&next, &current);
        if smallest < tie {
            return Err(Error::Undersampled { segment: segment - 1, increment: f64::NAN });
        }
        current = next * align.map(|x| Complex::new(x, 0.0));
    }
    let (holonomy, smallest) = procrustes(&current, &start);
    if smallest < tie {
        return Err(Error::Undersampled { segment: lp.segments() - 1, increment: f64::NAN });
    }
    Ok(holonomy)
}

/// Orthogonal factor aligning `moving` to `target`, and the smallest
/// singular value of the Gram matrix.
fn procrustes(moving: &CMatrix, target: &CMatrix) -> (DMatrix<f64>, f64) {
    let gram = (moving.adjoint() * target).map(|z| z.re);
    linalg::orthogonal_polar(&gram)
}

/// Whether the loop lifts to a closed loop in `U(n)`.
pub fn is_liftable(lp: &LagrangianLoop) -> Result<bool> {
    Ok(closing_holonomy(lp)?.determinant() > 0.0)
}

/// Named loop generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum LoopPreset {
    /// The fixed plane `R^n ⊕ 0`.
    Horizontal { n: usize },
    /// The fixed plane `0 ⊕ R^n`.
    Vertical { n: usize },
    /// A fixed random plane in `R^{2n}` (`seed` picks the plane).
    Constant {
        n: usize,
        #[serde(default)]
        seed: u64,
    },
    /// `t ↦ span(cos kπt, sin kπt)` in `R²`; index `k`.
    RotatingLine { k: i64 },
    /// Tangent lines of the unit circle in `C`; index 2.
    Circle,
    /// A smooth random loop through random planes with `twists` extra
    /// half-turns of the first unitary column; index `twists`.
    InterpolatedRandom { n: usize, seed: u64, twists: i64 },
}

impl LoopPreset {
    pub fn sampler(&self) -> Result<PresetSampler> {
        Ok(match *self {
            LoopPreset::Horizontal { n } => PresetSampler::Fixed(SymplecticSpace::new(n)?.horizontal()),
            LoopPreset::Vertical { n } => PresetSampler::Fixed(SymplecticSpace::new(n)?.vertical()),
            LoopPreset::Constant { n, seed } => PresetSampler::Fixed(SymplecticSpace::new(n)?.random_lagrangian(seed)),
            LoopPreset::RotatingLine { k } => PresetSampler::Line { turns: k as f64 * PI, offset: 0.0 },
            LoopPreset::Circle => PresetSampler::Line { turns: 2.0 * PI, offset: PI / 2.0 },
            LoopPreset::InterpolatedRandom { n, seed, twists } => {
                PresetSampler::Random(Box::new(RandomLoop::new(n, seed, twists)?))
            }
        })
    }

    pub fn build(&self, m: usize) -> Result<LagrangianLoop> {
        let sampler = self.sampler()?;
        LagrangianLoop::sample(m, |t| sampler.at(t))
    }

    /// The index this preset has by construction.
    pub fn expected_index(&self) -> i64 {
        match *self {
            LoopPreset::Horizontal { .. } | LoopPreset::Vertical { .. } | LoopPreset::Constant { .. } => 0,
            LoopPreset::RotatingLine { k } => k,
            LoopPreset::Circle => 2,
            LoopPreset::InterpolatedRandom { twists, .. } => twists,
        }
    }
}

/// A preset path ready to be evaluated at parameters in `[0, 1]`.
#[derive(Debug, Clone)]
pub enum PresetSampler {
    Fixed(LagrangianFrame),
    /// `t ↦ span(cos(turns·t + offset), sin(turns·t + offset))`.
    Line {
        turns: f64,
        offset: f64,
    },
    Random(Box<RandomLoop>),
}

impl PresetSampler {
    pub fn at(&self, t: f64) -> LagrangianFrame {
        match self {
            PresetSampler::Fixed(plane) => plane.clone(),
            PresetSampler::Line { turns, offset } => SymplecticSpace::line(turns * t + offset),
            PresetSampler::Random(path) => path.frame_at(t),
        }
    }
}

/// `t ↦ span(cos kπt, sin kπt)`, sampled with `m` segments.
pub fn rotating_line(k: i64, m: usize) -> Result<LagrangianLoop> {
    LagrangianLoop::sample(m, |t| SymplecticSpace::line(k as f64 * PI * t))
}

/// Smooth random loop `t ↦ W·exp(iK(t))·D(t)·R^n` in `L(R^{2n})`.
///
/// `K(t)` is the periodic trigonometric interpolant of random Hermitian
/// matrices placed at `KNOTS` equally spaced parameters, and
/// `D(t) = diag(e^{iπ·twists·t}, 1, …, 1)`. Since `tr K` is periodic and
/// `D(1)` is orthogonal, the loop closes and has index `twists`.
#[derive(Debug, Clone)]
pub struct RandomLoop {
    space: SymplecticSpace,
    base: CMatrix,
    knots: Vec<CMatrix>,
    twists: i64,
}

impl RandomLoop {
    const KNOTS: usize = 5;
    const AMPLITUDE: f64 = 0.35;

    pub fn new(n: usize, seed: u64, twists: i64) -> Result<Self> {
        use rand_distr::{Distribution, StandardNormal};
        let space = SymplecticSpace::new(n)?;
        let mut rng = stream_rng(seed, 1);
        let base_frame = space.random_lagrangian_with(&mut rng);
        let q = base_frame.basis();
        let base = linalg::complex_from_parts(&q.rows(0, n).clone_owned(), &q.rows(n, n).clone_owned());
        let knots = (0..Self::KNOTS)
            .map(|_| {
                let g = CMatrix::from_fn(n, n, |_, _| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex::new(re, im)
                });
                (&g + g.adjoint()) * Complex::new(0.5 * Self::AMPLITUDE, 0.0)
            })
            .collect();
        Ok(Self { space, base, knots, twists })
    }

    /// Periodic cardinal function for `r` (odd) equispaced knots.
    fn cardinal(r: usize, s: f64) -> f64 {
        let denom = (PI * s).sin();
        if denom.abs() < 1e-12 {
            return ((r as f64 * PI * s).cos() / (PI * s).cos()).signum();
        }
        (r as f64 * PI * s).sin() / (r as f64 * denom)
    }

    pub fn unitary_at(&self, t: f64) -> CMatrix {
        let n = self.space.n();
        let r = self.knots.len();
        let mut k = CMatrix::zeros(n, n);
        for (j, knot) in self.knots.iter().enumerate() {
            k += knot * Complex::new(Self::cardinal(r, t - j as f64 / r as f64), 0.0);
        }
        let mut twist = CMatrix::identity(n, n);
        twist[(0, 0)] = Complex::new(0.0, PI * self.twists as f64 * t).exp();
        &self.base * linalg::exp_i_hermitian(&k) * twist
    }

    pub fn frame_at(&self, t: f64) -> LagrangianFrame {
        LagrangianFrame::from_unitary(self.space, &self.unitary_at(t)).expect("unitary columns have full rank")
    }

    pub fn build(&self, m: usize) -> Result<LagrangianLoop> {
        LagrangianLoop::sample(m, |t| self.frame_at(t))
    }
}

/// `count` random loops with `n ∈ {1, 2, 3}` and `twists ∈ [−3, 3]`,
/// drawn from stream 3 of `seed`.
pub fn random_loop_suite(count: usize, seed: u64) -> Vec<LoopPreset> {
    use rand::Rng;
    let mut rng = stream_rng(seed, 3);
    (0..count)
        .map(|i| LoopPreset::InterpolatedRandom { n: 1 + i % 3, seed: rng.random(), twists: rng.random_range(-3..=3) })
        .collect()
}

/// JSON shape of a loop: `{"n": int, "samples": [basis matrices]}`, with
/// the closing sample included.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoopRecord {
    pub n: usize,
    pub samples: Vec<Vec<Vec<f64>>>,
}

impl From<&LagrangianLoop> for LoopRecord {
    fn from(lp: &LagrangianLoop) -> Self {
        LoopRecord { n: lp.space().n(), samples: lp.samples.iter().map(|s| FrameRecord::from(s).basis).collect() }
    }
}

impl LoopRecord {
    pub fn into_loop(self, tol: Tolerances) -> Result<LagrangianLoop> {
        let n = self.n;
        let frames = self
            .samples
            .into_iter()
            .map(|basis| FrameRecord { n, basis }.into_frame(tol))
            .collect::<Result<Vec<_>>>()?;
        LagrangianLoop::new(frames)
    }
}
