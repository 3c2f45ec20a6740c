//! Hörmander's index of four Lagrangian planes.
//!
//! For `X, Y` and two planes `Z, W` transversal to both, the forms
//! `Q_Z(y) = ω(p_Z^X y, y)` and `Q_W` live on a complement of `X ∩ Y` in
//! `Y`, and `(X, Y, Z, W) = ½(sign Q_Z − sign Q_W) = ind Q_W − ind Q_Z`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::symplectic::{projection_across, LagrangianFrame};

/// `Q_Z` restricted to a complement of `X ∩ Y` inside `Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticFormOnQuotient {
    /// `2n × r`; columns span a complement of `X ∩ Y` in `Y`, orthogonal to it.
    pub quotient_basis: DMatrix<f64>,
    /// `r × r` symmetric Gram matrix of the form in that basis.
    pub matrix: DMatrix<f64>,
    degenerate_rel: f64,
}

impl QuadraticFormOnQuotient {
    /// A bare form given by its symmetric matrix, with the default
    /// degeneracy threshold.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("form matrix must be square".into()));
        }
        let r = matrix.nrows();
        let sym = (&matrix + matrix.transpose()) * 0.5;
        if (&sym - &matrix).amax() > 1e-12 * matrix.amax().max(1.0) {
            return Err(Error::InvalidInput("form matrix must be symmetric".into()));
        }
        Ok(Self {
            quotient_basis: DMatrix::identity(r, r),
            matrix: sym,
            degenerate_rel: crate::Tolerances::default().degenerate_rel,
        })
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn signature(&self) -> Result<Signature> {
        signature_with(&self.matrix, self.degenerate_rel)
    }
}

/// Inertia of a nondegenerate form: numbers of positive and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    /// `sign Q = p − q`.
    pub fn sign(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    /// `ind Q = q`.
    pub fn index(&self) -> i64 {
        self.negative as i64
    }
}

pub fn signature(form: &QuadraticFormOnQuotient) -> Result<Signature> {
    form.signature()
}

fn signature_with(matrix: &DMatrix<f64>, degenerate_rel: f64) -> Result<Signature> {
    if matrix.nrows() == 0 {
        return Ok(Signature { positive: 0, negative: 0 });
    }
    let eigenvalues = matrix.clone().symmetric_eigenvalues();
    let largest = eigenvalues.amax();
    let smallest = eigenvalues.iter().fold(f64::INFINITY, |acc, l| acc.min(l.abs()));
    if largest == 0.0 || smallest < degenerate_rel * largest {
        let ratio = if largest == 0.0 { 0.0 } else { smallest / largest };
        return Err(Error::DegenerateForm { ratio });
    }
    let positive = eigenvalues.iter().filter(|&&l| l > 0.0).count();
    Ok(Signature { positive, negative: eigenvalues.len() - positive })
}

/// Orthonormal basis of the orthogonal complement of `X ∩ Y` inside `Y`.
pub fn quotient_complement(x: &LagrangianFrame, y: &LagrangianFrame) -> Result<DMatrix<f64>> {
    x.check_same_space(y)?;
    let qx = x.orthonormal_basis();
    let qy = y.orthonormal_basis();
    let off_x = &qy - &qx * (qx.transpose() * &qy);
    let svd = off_x.svd(false, true);
    let v_t = svd.v_t.expect("requested Vᵀ");
    let cutoff = x.space().tolerances().intersection;
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > cutoff).collect();
    let coords = DMatrix::from_fn(qy.ncols(), keep.len(), |i, j| v_t[(keep[j], i)]);
    Ok(qy * coords)
}

/// The form `Q_Z(y) = ω(p_Z^X y, y)` on `Y / X ∩ Y`.
pub fn q_form(x: &LagrangianFrame, y: &LagrangianFrame, z: &LagrangianFrame) -> Result<QuadraticFormOnQuotient> {
    x.check_same_space(y)?;
    x.check_same_space(z)?;
    let projection = projection_across(x, z)?;
    let basis = quotient_complement(x, y)?;
    let omega = x.space().omega();
    let raw = (&projection * &basis).transpose() * omega * &basis;
    let matrix = (&raw + raw.transpose()) * 0.5;
    let form = QuadraticFormOnQuotient {
        quotient_basis: basis,
        matrix,
        degenerate_rel: x.space().tolerances().degenerate_rel,
    };
    form.signature()?;
    Ok(form)
}

/// Four planes with `Z` and `W` each transversal to both `X` and `Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianQuadruple {
    pub x: LagrangianFrame,
    pub y: LagrangianFrame,
    pub z: LagrangianFrame,
    pub w: LagrangianFrame,
}

impl LagrangianQuadruple {
    pub fn new(x: LagrangianFrame, y: LagrangianFrame, z: LagrangianFrame, w: LagrangianFrame) -> Result<Self> {
        for plane in [&y, &z, &w] {
            x.check_same_space(plane)?;
        }
        for probe in [&z, &w] {
            if !probe.transversal(&x)? || !probe.transversal(&y)? {
                return Err(Error::NotTransversal);
            }
        }
        Ok(Self { x, y, z, w })
    }

    pub fn index(&self) -> Result<i64> {
        hormander_index(self)
    }
}

/// `(X, Y, Z, W) = ½(sign Q_Z − sign Q_W)`.
pub fn hormander_index(quad: &LagrangianQuadruple) -> Result<i64> {
    let sz = q_form(&quad.x, &quad.y, &quad.z)?.signature()?.sign();
    let sw = q_form(&quad.x, &quad.y, &quad.w)?.signature()?.sign();
    debug_assert_eq!((sz - sw) % 2, 0, "signatures on a common space share parity");
    Ok((sz - sw) / 2)
}

/// Convenience wrapper validating the quadruple first.
pub fn index_of(x: &LagrangianFrame, y: &LagrangianFrame, z: &LagrangianFrame, w: &LagrangianFrame) -> Result<i64> {
    LagrangianQuadruple::new(x.clone(), y.clone(), z.clone(), w.clone())?.index()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::SymplecticSpace;

    fn line_through(a: f64, b: f64) -> LagrangianFrame {
        SymplecticSpace::line(b.atan2(a))
    }

    #[test]
    fn q_form_examples() {
        let x = line_through(1.0, 0.0);
        let y = line_through(0.0, 1.0);
        let qz = q_form(&x, &y, &line_through(1.0, 1.0)).unwrap();
        assert_eq!(qz.rank(), 1);
        assert!((qz.matrix[(0, 0)] - 1.0).abs() < 1e-14);
        assert_eq!(qz.signature().unwrap(), Signature { positive: 1, negative: 0 });
        let qw = q_form(&x, &y, &line_through(1.0, -1.0)).unwrap();
        assert!((qw.matrix[(0, 0)] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn coincident_planes_give_empty_form() {
        let s = SymplecticSpace::new(2).unwrap();
        let x = s.random_lagrangian(5);
        let form = q_form(&x, &x, &s.random_lagrangian(6)).unwrap();
        assert_eq!(form.rank(), 0);
        assert_eq!(form.signature().unwrap().sign(), 0);
    }

    #[test]
    fn signature_of_matrices() {
        let one = QuadraticFormOnQuotient::from_matrix(DMatrix::from_element(1, 1, 1.0)).unwrap();
        assert_eq!(one.signature().unwrap(), Signature { positive: 1, negative: 0 });
        let mixed =
            QuadraticFormOnQuotient::from_matrix(DMatrix::from_diagonal(&nalgebra::dvector![2.0, -3.0])).unwrap();
        let sig = mixed.signature().unwrap();
        assert_eq!((sig.positive, sig.negative, sig.sign(), sig.index()), (1, 1, 0, 1));
        let degenerate =
            QuadraticFormOnQuotient::from_matrix(DMatrix::from_diagonal(&nalgebra::dvector![1.0, 0.0])).unwrap();
        assert!(matches!(degenerate.signature(), Err(Error::DegenerateForm { .. })));
    }

    #[test]
    fn plane_meeting_y_makes_form_degenerate() {
        let x = line_through(1.0, 0.0);
        let y = line_through(0.0, 1.0);
        assert!(matches!(q_form(&x, &y, &y), Err(Error::DegenerateForm { .. })));
        assert_eq!(q_form(&x, &y, &x), Err(Error::NotTransversal));
    }

    #[test]
    fn r2_quadruple() {
        let x = line_through(1.0, 0.0);
        let y = line_through(0.0, 1.0);
        let z = line_through(1.0, 1.0);
        let w = line_through(1.0, -1.0);
        assert_eq!(index_of(&x, &y, &z, &w).unwrap(), 1);
        assert_eq!(index_of(&x, &y, &w, &z).unwrap(), -1);
        assert_eq!(index_of(&x, &y, &z, &z).unwrap(), 0);
        assert_eq!(index_of(&x, &y, &x, &z), Err(Error::NotTransversal));
        // Same value in the index form ind Q_W − ind Q_Z.
        let iz = q_form(&x, &y, &z).unwrap().signature().unwrap().index();
        let iw = q_form(&x, &y, &w).unwrap().signature().unwrap().index();
        assert_eq!(iw - iz, 1);
    }
}
