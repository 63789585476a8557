//! Thin complex linear-algebra layer: type aliases and Hermitian
//! eigendecomposition with a fixed (descending) ordering convention.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};

pub type C64 = num_complex::Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Hermitian part (A + A^dagger)/2.
pub fn hermitize(a: &CMat) -> CMat {
    let adj = a.adjoint();
    (a + adj).scale(0.5)
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_residual(a: &CMat) -> f64 {
    let adj = a.adjoint();
    (a - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Largest entry modulus.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn eigvalsh(a: &CMat) -> Vec<f64> {
    let mut vals: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|x, y| y.partial_cmp(x).unwrap());
    vals
}

/// Full Hermitian eigendecomposition.
///
/// Returns eigenvalues in descending order and the matching eigenvector
/// columns (orthonormal).
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let decomp = SymmetricEigen::new(a.clone());
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        decomp.eigenvalues[j]
            .partial_cmp(&decomp.eigenvalues[i])
            .unwrap()
    });
    let vals: Vec<f64> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &decomp.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Operator norm of a Hermitian matrix (largest |eigenvalue|).
pub fn op_norm_hermitian(a: &CMat) -> f64 {
    eigvalsh(a).iter().map(|v| v.abs()).fold(0.0, f64::max)
}
