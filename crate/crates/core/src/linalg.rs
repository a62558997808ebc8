//! Small numerical helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::cmv::TridiagonalMatrix;

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenpairs of a symmetric matrix, ascending by eigenvalue.
pub fn symmetric_eigenpairs(m: &DMatrix<f64>) -> Vec<(f64, DVector<f64>)> {
    let eig = SymmetricEigen::new(m.clone());
    let mut pairs: Vec<(f64, DVector<f64>)> = (0..m.nrows())
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Spectrum of a symmetric tridiagonal matrix, ascending.
pub fn tridiagonal_eigenvalues(t: &TridiagonalMatrix) -> Vec<f64> {
    symmetric_eigenvalues(&t.to_dense())
}

/// Largest entry of `|x|` over the leading `m×m` block.
pub fn interior_max_abs(x: &DMatrix<f64>, m: usize) -> f64 {
    let m = m.min(x.nrows()).min(x.ncols());
    x.view((0, 0), (m, m)).amax()
}

/// Largest absolute difference of two equally long sequences.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
