//! Dense complex linear algebra for desk-scale problems.
//!
//! Everything here works on small, dense, row-major complex matrices. The
//! Hermitian eigensolver is cyclic two-sided Jacobi and the SVD is one-sided
//! (Hestenes) Jacobi; both are accurate to a few ulps of the matrix norm at
//! the sizes this crate targets (dimension up to a few dozen).

mod eigen;
mod matrix;
mod svd;

pub use eigen::{hermitian_eigen, hermitian_extreme_eig, psd_sqrt, EigenDecomposition, ExtremeEig};
pub use matrix::{ComplexMatrix, HermitianMatrix};
pub use svd::{singular_values, svd, top_singular_triplet, trace_norm, SingularTriplet, Svd};

use num_complex::Complex64;

/// Default absolute/relative tolerance for the kernel.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tolerance used when validating Hermitian symmetry.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix data length {len} does not match shape {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: |a[{row}][{col}] - conj(a[{col}][{row}])| = {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },
    #[error("{method} did not converge within {sweeps} sweeps")]
    NoConvergence { method: &'static str, sweeps: usize },
    #[error("matrix has zero dimension")]
    Empty,
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// `⟨a, b⟩ = Σ a_i conj(b_i)`, linear in the first argument.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Returns `a / ‖a‖`, or `None` for the zero vector.
pub fn normalized(a: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = norm(a);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    Some(a.iter().map(|z| z / n).collect())
}

pub fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `‖a - b‖`.
pub fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn unit_basis(dim: usize, k: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); dim];
    e[k] = Complex64::new(1.0, 0.0);
    e
}
