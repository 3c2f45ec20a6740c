//! The standard symplectic space `R^{2n}` and Lagrangian frames in it.
//!
//! Coordinates are ordered `(x₁,…,x_n, y₁,…,y_n)`. The symplectic form is
//! `ω = Σ dx_k∧dy_k`, the complex structure is multiplication by `i` under
//! `z = x + iy`, i.e. `J(x, y) = (−y, x)`, and the metric is Euclidean.
//! With these choices an orthonormal frame `(A over B)` of a Lagrangian plane
//! gives the unitary matrix `U = A + iB`, and `ω(u, v) = g(Ju, v)`.

use nalgebra::{Complex, DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tolerance::Tolerances;

/// A deterministic generator for `(seed, stream)`; distinct streams of the
/// same seed are independent.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticSpace {
    n: usize,
    tol: Tolerances,
}

impl SymplecticSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("half-dimension must be positive".into()));
        }
        Ok(Self { n, tol: Tolerances::default() })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Matrix of `ω`: `ω(u, v) = uᵀ·Ω·v` with `Ω = [[0, I], [−I, 0]]`.
    pub fn omega(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i < n && j == i + n {
                1.0
            } else if i >= n && j + n == i {
                -1.0
            } else {
                0.0
            }
        })
    }

    /// Matrix of `J`: `[[0, −I], [I, 0]]`.
    pub fn complex_structure(&self) -> DMatrix<f64> {
        -self.omega()
    }

    pub fn metric(&self) -> DMatrix<f64> {
        DMatrix::identity(self.dim(), self.dim())
    }

    pub fn omega_form(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        let n = self.n;
        (0..n).map(|k| u[k] * v[k + n] - u[k + n] * v[k]).sum()
    }

    pub fn metric_form(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        u.dot(v)
    }

    pub fn apply_j(&self, v: &DVector<f64>) -> DVector<f64> {
        let n = self.n;
        DVector::from_fn(2 * n, |i, _| if i < n { -v[i + n] } else { v[i - n] })
    }

    /// Fundamental form of the Hermitian structure, `Φ(u, v) = g(Ju, v)`.
    pub fn fundamental_form(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        self.metric_form(&self.apply_j(u), v)
    }

    /// The plane `R^n ⊕ 0`.
    pub fn horizontal(&self) -> LagrangianFrame {
        let n = self.n;
        let basis = DMatrix::from_fn(2 * n, n, |i, j| if i == j { 1.0 } else { 0.0 });
        LagrangianFrame { basis, space: *self }
    }

    /// The plane `0 ⊕ R^n`.
    pub fn vertical(&self) -> LagrangianFrame {
        let n = self.n;
        let basis = DMatrix::from_fn(2 * n, n, |i, j| if i == j + n { 1.0 } else { 0.0 });
        LagrangianFrame { basis, space: *self }
    }

    /// The plane `U·R^n` for a random unitary `U` (QR of a complex Gaussian
    /// matrix). Deterministic in `seed`.
    pub fn random_lagrangian(&self, seed: u64) -> LagrangianFrame {
        let mut rng = stream_rng(seed, 0);
        self.random_lagrangian_with(&mut rng)
    }

    pub fn random_lagrangian_with<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> LagrangianFrame {
        let n = self.n;
        let g = CMatrix::from_fn(n, n, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(re, im)
        });
        let q = g.qr().q();
        LagrangianFrame { basis: linalg::stack_real_imag(&q), space: *self }
    }

    /// The line spanned by `(cos t, sin t)` in `R²`.
    pub fn line(t: f64) -> LagrangianFrame {
        let space = SymplecticSpace { n: 1, tol: Tolerances::default() };
        LagrangianFrame { basis: DMatrix::from_column_slice(2, 1, &[t.cos(), t.sin()]), space }
    }
}

/// A plane of dimension `n` in `R^{2n}`, given by a spanning `2n × n` basis.
///
/// Construction only checks shape and rank; isotropy is measured by
/// [`LagrangianFrame::lagrangian_residual`] and enforced by the operations
/// that need it.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianFrame {
    basis: DMatrix<f64>,
    space: SymplecticSpace,
}

impl LagrangianFrame {
    pub fn new(space: SymplecticSpace, basis: DMatrix<f64>) -> Result<Self> {
        let n = space.n();
        if basis.nrows() != 2 * n || basis.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "basis is {}x{}, expected {}x{}",
                basis.nrows(),
                basis.ncols(),
                2 * n,
                n
            )));
        }
        if basis.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("basis has non-finite entries".into()));
        }
        let rank = linalg::numerical_rank(&basis, space.tolerances().rank_rel);
        if rank < n {
            return Err(Error::RankDeficient { rank, expected: n });
        }
        Ok(Self { basis, space })
    }

    /// Frame spanned by `(Re U over Im U)`.
    pub fn from_unitary(space: SymplecticSpace, u: &CMatrix) -> Result<Self> {
        Self::new(space, linalg::stack_real_imag(u))
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn with_space(mut self, space: SymplecticSpace) -> Self {
        self.space = space;
        self
    }

    /// Euclidean-orthonormal basis of the same plane.
    pub fn orthonormal_basis(&self) -> DMatrix<f64> {
        linalg::orthonormalize(&self.basis, self.space.tolerances().rank_rel).expect("rank checked at construction")
    }

    /// Max |entry| of `basisᵀ·Ω·basis` after normalizing each column.
    pub fn lagrangian_residual(&self) -> f64 {
        let mut b = self.basis.clone();
        for mut col in b.column_iter_mut() {
            let norm = col.norm();
            col /= norm;
        }
        linalg::max_abs(&(b.transpose() * self.space.omega() * &b))
    }

    fn require_lagrangian(&self) -> Result<()> {
        let residual = self.lagrangian_residual();
        let tolerance = self.space.tolerances().isotropy;
        if residual > tolerance {
            return Err(Error::NotLagrangian { residual, tolerance });
        }
        Ok(())
    }

    pub fn to_unitary(&self) -> Result<UnitaryRepresentative> {
        self.require_lagrangian()?;
        let q = self.orthonormal_basis();
        let n = self.n();
        let a = q.rows(0, n).clone_owned();
        let b = q.rows(n, n).clone_owned();
        let u = linalg::complex_from_parts(&a, &b);
        let defect = linalg::max_modulus(&(u.adjoint() * &u - CMatrix::identity(n, n)));
        if defect > self.space.tolerances().unitarity {
            return Err(Error::NotLagrangian { residual: defect, tolerance: self.space.tolerances().unitarity });
        }
        Ok(UnitaryRepresentative { u })
    }

    /// `det(U)²` of a unitary representative; independent of the frame.
    pub fn det_squared(&self) -> Result<Complex<f64>> {
        let d = self.to_unitary()?.u.determinant();
        Ok(d * d)
    }

    /// Sine of the largest principal angle to `other`.
    pub fn distance(&self, other: &LagrangianFrame) -> Result<f64> {
        self.check_same_space(other)?;
        Ok(linalg::max_principal_sin(&self.orthonormal_basis(), &other.orthonormal_basis()))
    }

    /// Whether `self ∩ other = {0}`.
    pub fn transversal(&self, other: &LagrangianFrame) -> Result<bool> {
        self.check_same_space(other)?;
        let joined = self.joined(other);
        Ok(linalg::numerical_rank(&joined, self.space.tolerances().rank_rel) == self.space.dim())
    }

    /// The projection with kernel `self` and image `image`.
    pub fn projection_onto(&self, image: &LagrangianFrame) -> Result<DMatrix<f64>> {
        projection_across(self, image)
    }

    fn joined(&self, other: &LagrangianFrame) -> DMatrix<f64> {
        let n = self.n();
        let mut joined = DMatrix::zeros(2 * n, 2 * n);
        joined.columns_mut(0, n).copy_from(&self.basis);
        joined.columns_mut(n, n).copy_from(&other.basis);
        joined
    }

    pub(crate) fn check_same_space(&self, other: &LagrangianFrame) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!(
                "planes live in R^{} and R^{}",
                self.space.dim(),
                other.space.dim()
            )));
        }
        Ok(())
    }
}

/// Whether `p ∩ q = {0}`.
pub fn transversal(p: &LagrangianFrame, q: &LagrangianFrame) -> Result<bool> {
    p.transversal(q)
}

/// The linear map with kernel `x` and image `z`, identity on `z`.
pub fn projection_across(x: &LagrangianFrame, z: &LagrangianFrame) -> Result<DMatrix<f64>> {
    x.check_same_space(z)?;
    if !x.transversal(z)? {
        return Err(Error::NotTransversal);
    }
    let n = x.n();
    // v = Z·a + X·b  ⇒  P v = Z·a.
    let joined = z.joined(x);
    let inv = joined.try_inverse().ok_or(Error::NotTransversal)?;
    let mut keep = DMatrix::zeros(2 * n, 2 * n);
    keep.columns_mut(0, n).copy_from(z.basis());
    Ok(keep * inv)
}

/// A unitary `U` whose columns, read through `C^n = R^n ⊕ R^n`, span the
/// plane it was built from. Determined up to right multiplication by `O(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryRepresentative {
    pub u: CMatrix,
}

impl UnitaryRepresentative {
    pub fn det(&self) -> Complex<f64> {
        self.u.determinant()
    }

    pub fn frame(&self, space: SymplecticSpace) -> Result<LagrangianFrame> {
        LagrangianFrame::from_unitary(space, &self.u)
    }
}

/// JSON shape of a frame: `{"n": int, "basis": [[real]]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameRecord {
    pub n: usize,
    pub basis: Vec<Vec<f64>>,
}

impl From<&LagrangianFrame> for FrameRecord {
    fn from(frame: &LagrangianFrame) -> Self {
        let basis = frame.basis.row_iter().map(|row| row.iter().copied().collect()).collect();
        FrameRecord { n: frame.n(), basis }
    }
}

impl FrameRecord {
    pub fn into_frame(self, tol: Tolerances) -> Result<LagrangianFrame> {
        let space = SymplecticSpace::new(self.n)?.with_tolerances(tol);
        let basis = matrix_from_rows(&self.basis, 2 * self.n, self.n)?;
        LagrangianFrame::new(space, basis)
    }
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>], nrows: usize, ncols: usize) -> Result<DMatrix<f64>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!("expected a {nrows}x{ncols} row-major matrix")));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

impl Serialize for LagrangianFrame {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FrameRecord::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LagrangianFrame {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        FrameRecord::deserialize(deserializer)?.into_frame(Tolerances::default()).map_err(serde::de::Error::custom)
    }
}
