//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{Complex, DMatrix, DVector};

pub type CMatrix = DMatrix<Complex<f64>>;

/// Singular values below `rel · σ_max` are treated as zero.
pub fn numerical_rank(m: &DMatrix<f64>, rel: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * max).count()
}

/// Modified Gram–Schmidt with one reorthogonalization pass.
///
/// Returns `None` when a column collapses below `rel` times its original
/// norm, i.e. the columns are numerically dependent.
pub fn orthonormalize(m: &DMatrix<f64>, rel: f64) -> Option<DMatrix<f64>> {
    let mut q = m.clone();
    for j in 0..q.ncols() {
        let original = q.column(j).norm();
        if original == 0.0 {
            return None;
        }
        for _pass in 0..2 {
            for i in 0..j {
                let proj = q.column(i).dot(&q.column(j));
                let qi = q.column(i).clone_owned();
                q.column_mut(j).axpy(-proj, &qi, 1.0);
            }
        }
        let norm = q.column(j).norm();
        if norm <= rel * original {
            return None;
        }
        q.column_mut(j).scale_mut(1.0 / norm);
    }
    Some(q)
}

/// Orthogonal projector onto the column span of an orthonormal `q`.
pub fn projector(q: &DMatrix<f64>) -> DMatrix<f64> {
    q * q.transpose()
}

/// Sine of the largest principal angle between two equal-dimensional
/// subspaces given by orthonormal bases.
pub fn max_principal_sin(q1: &DMatrix<f64>, q2: &DMatrix<f64>) -> f64 {
    let residual = q2 - q1 * (q1.transpose() * q2);
    if residual.ncols() == 0 {
        return 0.0;
    }
    residual.singular_values().max().min(1.0)
}

/// Smallest singular value of `[q1 | q2]`. Zero iff the spans intersect;
/// equals `sqrt(1 − cos θ_min)` for the smallest principal angle.
pub fn transversality_margin(q1: &DMatrix<f64>, q2: &DMatrix<f64>) -> f64 {
    let mut joined = DMatrix::zeros(q1.nrows(), q1.ncols() + q2.ncols());
    joined.columns_mut(0, q1.ncols()).copy_from(q1);
    joined.columns_mut(q1.ncols(), q2.ncols()).copy_from(q2);
    joined.singular_values().min()
}

/// Orthogonal polar factor of a square real matrix together with its
/// smallest singular value (zero means the factor is not unique).
pub fn orthogonal_polar(m: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested Vᵀ");
    (u * v_t, svd.singular_values.min())
}

/// Unitary polar factor of a square complex matrix.
pub fn unitary_polar(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    svd.u.expect("requested U") * svd.v_t.expect("requested V*")
}

pub fn complex_from_parts(re: &DMatrix<f64>, im: &DMatrix<f64>) -> CMatrix {
    DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex::new(re[(i, j)], im[(i, j)]))
}

/// Stack `[Re m; Im m]` into a real `2r × c` matrix.
pub fn stack_real_imag(m: &CMatrix) -> DMatrix<f64> {
    let (r, c) = m.shape();
    DMatrix::from_fn(2 * r, c, |i, j| if i < r { m[(i, j)].re } else { m[(i - r, j)].im })
}

/// `exp(i·K)` for a Hermitian `K`.
pub fn exp_i_hermitian(k: &CMatrix) -> CMatrix {
    let eig = nalgebra::SymmetricEigen::new(k.clone());
    let phases =
        DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|&l| Complex::new(0.0, l).exp()));
    let v = &eig.eigenvectors;
    v * CMatrix::from_diagonal(&phases) * v.adjoint()
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn max_modulus(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_columns() {
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        assert_eq!(numerical_rank(&m, 1e-10), 1);
        assert!(orthonormalize(&m, 1e-10).is_none());
    }

    #[test]
    fn gram_schmidt_is_orthonormal() {
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 0.0, 1e-6, 0.0, 0.0]);
        let q = orthonormalize(&m, 1e-12).unwrap();
        let gram = q.transpose() * &q;
        assert!((gram - DMatrix::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn exp_of_scalar_phase() {
        let k = CMatrix::from_element(1, 1, Complex::new(0.3, 0.0));
        let e = exp_i_hermitian(&k);
        assert!((e[(0, 0)] - Complex::new(0.0, 0.3).exp()).norm() < 1e-14);
    }

    #[test]
    fn principal_angle_between_lines() {
        let a = DMatrix::from_column_slice(2, 1, &[1.0, 0.0]);
        let t = 0.4_f64;
        let b = DMatrix::from_column_slice(2, 1, &[t.cos(), t.sin()]);
        assert!((max_principal_sin(&a, &b) - t.sin()).abs() < 1e-14);
    }
}
