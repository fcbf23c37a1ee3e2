use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use super::{LinalgError, Result, HERMITIAN_TOL};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(idx) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(LinalgError::NonFinite {
                row: idx / cols.max(1),
                col: idx % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Square diagonal matrix.
    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        Self::from_fn(rows, cols, |i, j| columns[j][i])
    }

    /// The rank-one matrix `x y*`, i.e. `u ↦ ⟨u, y⟩ x`.
    pub fn outer(x: &[Complex64], y: &[Complex64]) -> Self {
        Self::from_fn(x.len(), y.len(), |i, j| x[i] * y[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Accumulates `c · x y*` into `self`.
    pub fn add_outer(&mut self, c: Complex64, x: &[Complex64], y: &[Complex64]) {
        assert_eq!(x.len(), self.rows);
        assert_eq!(y.len(), self.cols);
        for (i, xi) in x.iter().enumerate() {
            let cx = c * xi;
            let row = &mut self.data[i * self.cols..(i + 1) * self.cols];
            for (entry, yj) in row.iter_mut().zip(y) {
                *entry += cx * yj.conj();
            }
        }
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        super::svd::singular_values(self)
            .map(|s| s.first().copied().unwrap_or(0.0))
            .expect("one-sided Jacobi failed on a finite matrix")
    }

    /// Copies `block` into `self` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &ComplexMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// A square matrix validated to be Hermitian.
///
/// Construction checks `|a_ij - conj(a_ji)| ≤ 1e-12` and then stores the
/// exactly Hermitian part `(A + A*)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, HERMITIAN_TOL)
    }

    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        let n = m.rows;
        for i in 0..n {
            for j in i..n {
                let deviation = (m[(i, j)] - m[(j, i)].conj()).norm();
                if deviation > tol {
                    return Err(LinalgError::NotHermitian {
                        row: i,
                        col: j,
                        deviation,
                    });
                }
            }
        }
        let sym = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(m[(i, i)].re, 0.0)
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * 0.5
            }
        });
        Ok(Self(sym))
    }

    /// Hermitian part of an arbitrary square matrix, without validation.
    pub fn hermitian_part(m: &ComplexMatrix) -> Self {
        assert!(m.is_square());
        let n = m.rows;
        Self(ComplexMatrix::from_fn(n, n, |i, j| {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `⟨M z, z⟩`, real for Hermitian `M`.
    pub fn quadratic_form(&self, z: &[Complex64]) -> f64 {
        super::inner(&self.0.mul_vec(z), z).re
    }

    /// Inverse of a positive definite matrix through its eigendecomposition.
    pub fn inverse_pd(&self) -> Result<HermitianMatrix> {
        let eig = super::hermitian_eigen(self)?;
        let min = eig.values.first().copied().unwrap_or(0.0);
        if min <= 0.0 {
            return Err(LinalgError::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(eig.reassemble(|lambda| 1.0 / lambda))
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_shape_and_nan() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![ZERO; 3]),
            Err(LinalgError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![ZERO, c(f64::NAN, 0.0)]),
            Err(LinalgError::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn product_and_adjoint() {
        let a = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.0)],
        )
        .unwrap();
        let id = ComplexMatrix::identity(2);
        assert_eq!(&a * &id, a);
        let aa = &a.adjoint() * &a;
        assert!(HermitianMatrix::new(aa).is_ok());
    }

    #[test]
    fn outer_acts_as_rank_one_map() {
        let x = vec![c(1.0, 0.0), c(0.0, 2.0)];
        let y = vec![c(0.5, -1.0), c(3.0, 0.0)];
        let u = vec![c(0.3, 0.1), c(-1.0, 0.4)];
        let lhs = ComplexMatrix::outer(&x, &y).mul_vec(&u);
        let coeff = super::super::inner(&u, &y);
        for (l, xi) in lhs.iter().zip(&x) {
            assert!((l - coeff * xi).norm() < 1e-14);
        }
    }

    #[test]
    fn hermitian_validation() {
        let bad = ComplexMatrix::new(2, 2, vec![ONE, c(0.0, 1.0), c(0.0, 1.0), ONE]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(bad),
            Err(LinalgError::NotHermitian { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            HermitianMatrix::new(ComplexMatrix::zeros(2, 3)),
            Err(LinalgError::NotSquare { .. })
        ));
    }
}
