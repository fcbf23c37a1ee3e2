//! Frame operators, Bessel/frame bounds and the pair operator `T = Σ x_k y_k*`.

use num_complex::Complex64;

use crate::linalg::{self, hermitian_extreme_eig, ComplexMatrix, HermitianMatrix, LinalgError};

/// Smallest frame-operator eigenvalue that still counts as a frame.
pub const FRAME_TOL: f64 = 1e-10;

/// Vectors with norm at or below this are treated as zero.
pub const ZERO_VECTOR_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrameError {
    #[error("a frame pair needs at least one vector")]
    Empty,
    #[error("x has {xs} vectors but y has {ys}")]
    CountMismatch { xs: usize, ys: usize },
    #[error("{family}[{index}] has dimension {found}, expected {expected}")]
    DimensionMismatch {
        family: &'static str,
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("{family}[{index}] is zero (norm {norm:e})")]
    ZeroVector {
        family: &'static str,
        index: usize,
        norm: f64,
    },
    #[error("{family}[{index}] has a non-finite coordinate")]
    NonFinite { family: &'static str, index: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Two equally long sequences `{x_k}`, `{y_k}` of nonzero vectors in `ℂ^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct FramePair {
    dim: usize,
    xs: Vec<Vec<Complex64>>,
    ys: Vec<Vec<Complex64>>,
}

impl FramePair {
    pub fn new(xs: Vec<Vec<Complex64>>, ys: Vec<Vec<Complex64>>) -> Result<Self, FrameError> {
        if xs.len() != ys.len() {
            return Err(FrameError::CountMismatch {
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        let dim = check_family("x", &xs, None)?;
        check_family("y", &ys, Some(dim))?;
        Ok(Self { dim, xs, ys })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[Vec<Complex64>] {
        &self.xs
    }

    pub fn ys(&self) -> &[Vec<Complex64>] {
        &self.ys
    }

    /// `(β_k x_k, conj(β_k)⁻¹ y_k)`; leaves the pair operator unchanged.
    pub fn rescaled(&self, betas: &[Complex64]) -> Result<Self, FrameError> {
        assert_eq!(betas.len(), self.len(), "one scalar per index");
        let xs = self
            .xs
            .iter()
            .zip(betas)
            .map(|(x, b)| x.iter().map(|z| z * b).collect())
            .collect();
        let ys = self
            .ys
            .iter()
            .zip(betas)
            .map(|(y, b)| {
                let inv = b.conj().inv();
                y.iter().map(|z| z * inv).collect()
            })
            .collect();
        Self::new(xs, ys)
    }

    /// Applies a common matrix to every vector of both families.
    pub fn transformed(&self, u: &ComplexMatrix) -> Result<Self, FrameError> {
        let xs = self.xs.iter().map(|x| u.mul_vec(x)).collect();
        let ys = self.ys.iter().map(|y| u.mul_vec(y)).collect();
        Self::new(xs, ys)
    }

    /// The pair with the roles of `x` and `y` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            dim: self.dim,
            xs: self.ys.clone(),
            ys: self.xs.clone(),
        }
    }

    /// `Σ_k ‖x_k‖‖y_k‖`, the trivial upper bound for every norm of the pair.
    pub fn norm_product_sum(&self) -> f64 {
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(x, y)| linalg::norm(x) * linalg::norm(y))
            .sum()
    }
}

fn check_family(
    family: &'static str,
    vectors: &[Vec<Complex64>],
    expected: Option<usize>,
) -> Result<usize, FrameError> {
    let first = vectors.first().ok_or(FrameError::Empty)?;
    let dim = expected.unwrap_or(first.len());
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != dim || dim == 0 {
            return Err(FrameError::DimensionMismatch {
                family,
                index,
                expected: dim,
                found: v.len(),
            });
        }
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(FrameError::NonFinite { family, index });
        }
        let norm = linalg::norm(v);
        if norm <= ZERO_VECTOR_TOL {
            return Err(FrameError::ZeroVector {
                family,
                index,
                norm,
            });
        }
    }
    Ok(dim)
}

/// `S = Σ_k x_k x_k*`, so that `⟨S u, u⟩ = Σ_k |⟨u, x_k⟩|²`.
pub fn frame_operator(vectors: &[Vec<Complex64>]) -> Result<HermitianMatrix, FrameError> {
    weighted_frame_operator(vectors, |_| 1.0)
}

/// `Σ_k c_k x_k x_k*` with nonnegative weights `c_k = weight(k)`.
pub fn weighted_frame_operator(
    vectors: &[Vec<Complex64>],
    weight: impl Fn(usize) -> f64,
) -> Result<HermitianMatrix, FrameError> {
    let dim = vectors.first().ok_or(FrameError::Empty)?.len();
    let mut s = ComplexMatrix::zeros(dim, dim);
    for (index, x) in vectors.iter().enumerate() {
        if x.len() != dim {
            return Err(FrameError::DimensionMismatch {
                family: "x",
                index,
                expected: dim,
                found: x.len(),
            });
        }
        s.add_outer(Complex64::new(weight(index), 0.0), x, x);
    }
    Ok(HermitianMatrix::hermitian_part(&s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    /// Optimal lower frame bound `λ_min(S)`.
    pub lower: f64,
    /// Optimal Bessel bound `λ_max(S)`.
    pub upper: f64,
    pub is_frame: bool,
}

pub fn bessel_and_frame_bounds(vectors: &[Vec<Complex64>]) -> Result<FrameBounds, FrameError> {
    bounds_of(&frame_operator(vectors)?)
}

pub(crate) fn bounds_of(s: &HermitianMatrix) -> Result<FrameBounds, FrameError> {
    let e = hermitian_extreme_eig(s, linalg::DEFAULT_TOL)?;
    Ok(FrameBounds {
        lower: e.lambda_min,
        upper: e.lambda_max,
        is_frame: e.lambda_min > FRAME_TOL,
    })
}

/// `T = Σ_k x_k y_k*`, i.e. `T u = Σ_k ⟨u, y_k⟩ x_k`.
pub fn pair_operator(pair: &FramePair) -> ComplexMatrix {
    let d = pair.dim();
    let mut t = ComplexMatrix::zeros(d, d);
    for (x, y) in pair.xs().iter().zip(pair.ys()) {
        t.add_outer(Complex64::new(1.0, 0.0), x, y);
    }
    t
}

/// `‖T − I‖`.
pub fn schauder_deviation(pair: &FramePair) -> f64 {
    let t = pair_operator(pair);
    (&t - &ComplexMatrix::identity(pair.dim())).op_norm()
}

/// True when the reconstruction `u = Σ ⟨u, y_k⟩ x_k` holds to `tol` in
/// operator norm.
pub fn is_schauder_identity(pair: &FramePair, tol: f64) -> bool {
    schauder_deviation(pair) <= tol
}

/// Canonical dual `S⁻¹ x_k` of a frame.
pub fn canonical_dual(vectors: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>, FrameError> {
    let s_inv = frame_operator(vectors)?.inverse_pd()?;
    Ok(vectors
        .iter()
        .map(|x| s_inv.as_matrix().mul_vec(x))
        .collect())
}
