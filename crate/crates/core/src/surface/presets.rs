//! Named immersions.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use std::f64::consts::PI;

use super::ImmersedLagrangianGrid;
use crate::error::{Error, Result};
use crate::symplectic::{stream_rng, SymplecticSpace};

/// `cos·cos(k·x) + sin·sin(k·x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub k: Vec<i64>,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

/// A real trigonometric polynomial on `T^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    n: usize,
    terms: Vec<TrigTerm>,
}

impl TrigPolynomial {
    pub fn new(n: usize, terms: Vec<TrigTerm>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.k.len() != n) {
            return Err(Error::DimensionMismatch(format!("frequency {:?} in {n} variables", t.k)));
        }
        Ok(Self { n, terms })
    }

    /// `count` terms with frequencies in `[-2, 2]^n` and coefficients of
    /// size at most `amplitude`, from stream 2 of `seed`.
    pub fn random(n: usize, seed: u64, count: usize, amplitude: f64) -> Self {
        let mut rng = stream_rng(seed, 2);
        let terms = (0..count)
            .map(|_| {
                let mut k: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2)).collect();
                if k.iter().all(|&c| c == 0) {
                    k[rng.random_range(0..n)] = 1;
                }
                TrigTerm {
                    k,
                    cos: amplitude * rng.random_range(-1.0..1.0),
                    sin: amplitude * rng.random_range(-1.0..1.0),
                }
            })
            .collect();
        Self { n, terms }
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    fn phase(term: &TrigTerm, x: &[f64]) -> f64 {
        term.k.iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let p = Self::phase(t, x);
                t.cos * p.cos() + t.sin * p.sin()
            })
            .sum()
    }

    pub fn gradient(&self, x: &[f64]) -> DVector<f64> {
        let mut g = DVector::zeros(self.n);
        for t in &self.terms {
            let p = Self::phase(t, x);
            let d = -t.cos * p.sin() + t.sin * p.cos();
            for (gi, &k) in g.iter_mut().zip(&t.k) {
                *gi += k as f64 * d;
            }
        }
        g
    }

    pub fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.n, self.n);
        for t in &self.terms {
            let p = Self::phase(t, x);
            let d = -t.cos * p.cos() - t.sin * p.sin();
            for i in 0..self.n {
                for j in 0..self.n {
                    h[(i, j)] += (t.k[i] * t.k[j]) as f64 * d;
                }
            }
        }
        h
    }

    /// Sum of `|k|_∞ · (|cos| + |sin|)`, a bound for every partial derivative.
    pub fn gradient_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.k.iter().map(|k| k.abs()).max().unwrap_or(0) as f64 * (t.cos.abs() + t.sin.abs()))
            .sum()
    }
}

/// Immersion presets. `m` is the number of nodes along each axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfacePreset {
    /// `t ↦ r·e^{it}` in `C`.
    Circle {
        #[serde(default = "unit")]
        r: f64,
        m: usize,
    },
    /// `(r_1 e^{it_1}, …, r_n e^{it_n})` in `C^n`.
    ProductTorus { radii: Vec<f64>, m: usize },
    /// `x ↦ (x, ∇f(x) + S·x)` in `T*T^n` for a trigonometric polynomial `f`
    /// and an optional constant symmetric `S`.
    LagrangianGraph {
        n: usize,
        #[serde(default)]
        terms: Vec<TrigTerm>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quadratic: Option<Vec<Vec<f64>>>,
        m: usize,
    },
    /// `x ↦ (x, 0)` in `T*T^n`.
    FlatPlane { n: usize, m: usize },
    /// The product torus written in action–angle form as the graph
    /// `I = r²/2 + ∂f(t)` over the angles.
    PerturbedTorus { radii: Vec<f64>, terms: Vec<TrigTerm>, m: usize },
}

fn unit() -> f64 {
    1.0
}

impl SurfacePreset {
    /// A product torus with radii 1 perturbed by a seeded trigonometric
    /// polynomial whose gradient stays below a quarter of the actions.
    pub fn perturbed_torus(n: usize, seed: u64, m: usize) -> Self {
        let raw = TrigPolynomial::random(n, seed, 3, 1.0);
        let scale = 0.125 / raw.gradient_bound().max(1e-12);
        let terms =
            raw.terms().iter().map(|t| TrigTerm { k: t.k.clone(), cos: t.cos * scale, sin: t.sin * scale }).collect();
        SurfacePreset::PerturbedTorus { radii: vec![1.0; n], terms, m }
    }

    /// A seeded periodic Lagrangian graph over `T^n`.
    pub fn random_graph(n: usize, seed: u64, m: usize) -> Self {
        let f = TrigPolynomial::random(n, seed, 3, 0.3);
        SurfacePreset::LagrangianGraph { n, terms: f.terms().to_vec(), quadratic: None, m }
    }

    /// Nodes per axis.
    pub fn m(&self) -> usize {
        match self {
            SurfacePreset::Circle { m, .. }
            | SurfacePreset::ProductTorus { m, .. }
            | SurfacePreset::LagrangianGraph { m, .. }
            | SurfacePreset::FlatPlane { m, .. }
            | SurfacePreset::PerturbedTorus { m, .. } => *m,
        }
    }

    /// The same immersion sampled with `m` nodes per axis.
    pub fn with_m(&self, m: usize) -> Self {
        let mut p = self.clone();
        match &mut p {
            SurfacePreset::Circle { m: slot, .. }
            | SurfacePreset::ProductTorus { m: slot, .. }
            | SurfacePreset::LagrangianGraph { m: slot, .. }
            | SurfacePreset::FlatPlane { m: slot, .. }
            | SurfacePreset::PerturbedTorus { m: slot, .. } => *slot = m,
        }
        p
    }

    /// Whether `β` is exact: graphs over the torus are, closed tori in `C^n` are not.
    pub fn expected_lh(&self) -> bool {
        matches!(self, SurfacePreset::LagrangianGraph { .. } | SurfacePreset::FlatPlane { .. })
    }

    /// Maslov index of every generator, known by construction.
    pub fn expected_maslov(&self) -> Vec<i64> {
        match self {
            SurfacePreset::Circle { .. } => vec![2],
            SurfacePreset::ProductTorus { radii, .. } | SurfacePreset::PerturbedTorus { radii, .. } => {
                vec![2; radii.len()]
            }
            SurfacePreset::LagrangianGraph { n, .. } | SurfacePreset::FlatPlane { n, .. } => vec![0; *n],
        }
    }

    pub fn build(&self) -> Result<ImmersedLagrangianGrid> {
        match self {
            SurfacePreset::Circle { r, m } => {
                check_radii(&[*r])?;
                let space = SymplecticSpace::new(1)?;
                let r = *r;
                ImmersedLagrangianGrid::from_fn(space, vec![*m], vec![DVector::zeros(2)], move |t| {
                    DVector::from_vec(vec![r * t[0].cos(), r * t[0].sin()])
                })
            }
            SurfacePreset::ProductTorus { radii, m } => {
                check_radii(radii)?;
                let n = radii.len();
                let space = SymplecticSpace::new(n)?;
                let radii = radii.clone();
                ImmersedLagrangianGrid::from_fn(space, vec![*m; n], vec![DVector::zeros(2 * n); n], move |t| {
                    let mut x = DVector::zeros(2 * n);
                    for j in 0..n {
                        x[j] = radii[j] * t[j].cos();
                        x[n + j] = radii[j] * t[j].sin();
                    }
                    x
                })
            }
            SurfacePreset::LagrangianGraph { n, terms, quadratic, m } => {
                let n = *n;
                let space = SymplecticSpace::new(n)?;
                let f = TrigPolynomial::new(n, terms.clone())?;
                let s = match quadratic {
                    Some(rows) => symmetric_from_rows(rows, n)?,
                    None => DMatrix::zeros(n, n),
                };
                let translations = (0..n)
                    .map(|a| {
                        let mut t = DVector::zeros(2 * n);
                        t[a] = 2.0 * PI;
                        t.rows_mut(n, n).copy_from(&(s.column(a) * (2.0 * PI)));
                        t
                    })
                    .collect();
                ImmersedLagrangianGrid::from_fn(space, vec![*m; n], translations, move |x| {
                    let mut p = DVector::zeros(2 * n);
                    p.rows_mut(0, n).copy_from_slice(x);
                    let y = f.gradient(x) + &s * DVector::from_column_slice(x);
                    p.rows_mut(n, n).copy_from(&y);
                    p
                })
            }
            SurfacePreset::FlatPlane { n, m } => {
                SurfacePreset::LagrangianGraph { n: *n, terms: vec![], quadratic: None, m: *m }.build()
            }
            SurfacePreset::PerturbedTorus { radii, terms, m } => {
                check_radii(radii)?;
                let n = radii.len();
                let space = SymplecticSpace::new(n)?;
                let f = TrigPolynomial::new(n, terms.clone())?;
                let actions: Vec<f64> = radii.iter().map(|r| r * r / 2.0).collect();
                let low = actions.iter().cloned().fold(f64::INFINITY, f64::min);
                if f.gradient_bound() >= low {
                    return Err(Error::InvalidInput("perturbation must keep every action positive".into()));
                }
                ImmersedLagrangianGrid::from_fn(space, vec![*m; n], vec![DVector::zeros(2 * n); n], move |t| {
                    let g = f.gradient(t);
                    let mut x = DVector::zeros(2 * n);
                    for j in 0..n {
                        let r = (2.0 * (actions[j] + g[j])).sqrt();
                        x[j] = r * t[j].cos();
                        x[n + j] = r * t[j].sin();
                    }
                    x
                })
            }
        }
    }
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::InvalidInput("radii must be positive".into()));
    }
    Ok(())
}

fn symmetric_from_rows(rows: &[Vec<f64>], n: usize) -> Result<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("quadratic part must be {n}×{n}")));
    }
    let s = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    if (&s - s.transpose()).amax() > 1e-12 {
        return Err(Error::InvalidInput("quadratic part must be symmetric".into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_derivatives_match_finite_differences() {
        let f = TrigPolynomial::random(2, 3, 4, 0.5);
        let x = [0.3, -1.1];
        let h = 1e-5;
        let g = f.gradient(&x);
        let hess = f.hessian(&x);
        for i in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            assert!(((f.value(&xp) - f.value(&xm)) / (2.0 * h) - g[i]).abs() < 1e-8);
            let dg = (f.gradient(&xp) - f.gradient(&xm)) / (2.0 * h);
            assert!((dg - hess.column(i)).amax() < 1e-8);
        }
    }

    #[test]
    fn preset_json_shape() {
        let p: SurfacePreset = serde_json::from_str(r#"{"preset":"circle","m":16}"#).unwrap();
        assert_eq!(p, SurfacePreset::Circle { r: 1.0, m: 16 });
        let g: SurfacePreset =
            serde_json::from_str(r#"{"preset":"lagrangian_graph","n":2,"m":8,"terms":[{"k":[1,0],"cos":0.2}]}"#)
                .unwrap();
        assert_eq!(g.expected_maslov(), vec![0, 0]);
        assert!(serde_json::from_str::<SurfacePreset>(r#"{"preset":"circle","m":16,"x":1}"#).is_err());
    }

    #[test]
    fn perturbed_tori_stay_valid() {
        for seed in 0..20 {
            let p = SurfacePreset::perturbed_torus(2, seed, 8);
            p.build().unwrap();
        }
        let bad = SurfacePreset::PerturbedTorus {
            radii: vec![1.0],
            terms: vec![TrigTerm { k: vec![1], cos: 0.6, sin: 0.0 }],
            m: 8,
        };
        assert!(bad.build().is_err());
    }
}
