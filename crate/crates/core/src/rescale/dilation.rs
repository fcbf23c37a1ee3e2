//! Explicit dilation `Φ(a) = M · V₁* π(a) V₂` on `𝒦 = ℂⁿ ⊕ ℂ^d ⊕ ℂ^d`.

use num_complex::Complex64;

use super::{scaled_pair, LogWeights, RescaleError, Result};
use crate::frames::{self, FramePair};
use crate::linalg::{psd_sqrt, ComplexMatrix, HermitianMatrix};
use crate::multiplier::{MultiplierError, ScalarMask};

/// Slack allowed between the Bessel bounds and the scale `M`.
pub const PADDING_TOL: f64 = 1e-10;

/// Isometries `V₁, V₂ : ℂ^d → ℂ^{n+2d}` and scale `M`.
///
/// `π(a)` acts diagonally: coordinate `k < n` is multiplied by `a(k)`, both
/// padding blocks by `a(0)`.
#[derive(Debug, Clone)]
pub struct Dilation {
    n: usize,
    d: usize,
    scale: f64,
    v1: ComplexMatrix,
    v2: ComplexMatrix,
}

impl Dilation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// `n + 2d`.
    pub fn big_dim(&self) -> usize {
        self.n + 2 * self.d
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn v1(&self) -> &ComplexMatrix {
        &self.v1
    }

    pub fn v2(&self) -> &ComplexMatrix {
        &self.v2
    }

    /// Diagonal of `π(a)`.
    pub fn pi_diagonal(&self, a: &ScalarMask) -> Result<Vec<Complex64>> {
        if a.len() != self.n {
            return Err(MultiplierError::MaskLength {
                expected: self.n,
                found: a.len(),
            }
            .into());
        }
        let e = a.entries();
        let mut diag = e.to_vec();
        diag.resize(self.big_dim(), e[0]);
        Ok(diag)
    }

    /// `(‖V₁*V₁ − I‖_max, ‖V₂*V₂ − I‖_max)`.
    pub fn isometry_defects(&self) -> (f64, f64) {
        let id = ComplexMatrix::identity(self.d);
        let defect = |v: &ComplexMatrix| (&(&v.adjoint() * v) - &id).max_abs();
        (defect(&self.v1), defect(&self.v2))
    }
}

/// Builds the dilation from weights whose rescaled families are `M`-Bessel.
pub fn build_dilation(pair: &FramePair, weights: &LogWeights, scale: f64) -> Result<Dilation> {
    let scaled = scaled_pair(pair, weights)?;
    let (n, d) = (pair.len(), pair.dim());
    let v1 = isometry(scaled.xs(), scale, "x", n + 2 * d, n + d)?;
    let v2 = isometry(scaled.ys(), scale, "y", n + 2 * d, n)?;
    Ok(Dilation {
        n,
        d,
        scale,
        v1,
        v2,
    })
}

/// Rows `M^{-1/2} z_k*` followed by `√(I − S_z/M)` at row `pad_row`.
fn isometry(
    zs: &[Vec<Complex64>],
    scale: f64,
    family: &'static str,
    rows: usize,
    pad_row: usize,
) -> Result<ComplexMatrix> {
    let d = zs[0].len();
    let s = frames::frame_operator(zs)?;
    let bessel = frames::bounds_of(&s)?.upper;
    if !(scale > 0.0) || bessel > scale + PADDING_TOL {
        return Err(RescaleError::PaddingNotPsd {
            family,
            bessel,
            scale,
        });
    }
    let gap = &ComplexMatrix::identity(d) - &s.as_matrix().scale_real(1.0 / scale);
    let pad = psd_sqrt(&HermitianMatrix::hermitian_part(&gap), PADDING_TOL / scale)?;
    let r = scale.sqrt().recip();
    let mut v = ComplexMatrix::zeros(rows, d);
    for (k, z) in zs.iter().enumerate() {
        for (j, zj) in z.iter().enumerate() {
            v[(k, j)] = zj.conj() * r;
        }
    }
    v.set_block(pad_row, 0, pad.as_matrix());
    Ok(v)
}

/// `M · V₁* π(a) V₂`.
pub fn dilation_reconstruct(dilation: &Dilation, a: &ScalarMask) -> Result<ComplexMatrix> {
    let diag = dilation.pi_diagonal(a)?;
    let pi_v2 = ComplexMatrix::from_fn(dilation.big_dim(), dilation.d, |i, j| {
        diag[i] * dilation.v2[(i, j)]
    });
    Ok((&dilation.v1.adjoint() * &pi_v2).scale_real(dilation.scale))
}

/// Largest entry of `M·V₁*π(e_k)V₂ − x_k y_k*` over all `k`.
pub fn rank_one_residual(pair: &FramePair, dilation: &Dilation) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (k, (x, y)) in pair.xs().iter().zip(pair.ys()).enumerate() {
        let rebuilt = dilation_reconstruct(dilation, &ScalarMask::basis(pair.len(), k))?;
        let target = ComplexMatrix::outer(x, y);
        worst = worst.max((&rebuilt - &target).max_abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::pair_operator;
    use crate::linalg::unit_basis;
    use crate::multiplier::mask_matrix;
    use crate::random;
    use crate::rescale::{optimize, OptimizeConfig};

    fn onb_pair(d: usize) -> FramePair {
        let b: Vec<_> = (0..d).map(|k| unit_basis(d, k)).collect();
        FramePair::new(b.clone(), b).unwrap()
    }

    #[test]
    fn orthonormal_has_no_padding() {
        let pair = onb_pair(3);
        let dil = build_dilation(&pair, &LogWeights::zeros(3), 1.0).unwrap();
        assert_eq!(dil.big_dim(), 9);
        for i in 3..9 {
            for j in 0..3 {
                assert!(dil.v1()[(i, j)].norm() < 1e-12);
                assert!(dil.v2()[(i, j)].norm() < 1e-12);
            }
        }
        let rebuilt = dilation_reconstruct(&dil, &ScalarMask::ones(3)).unwrap();
        assert!((&rebuilt - &ComplexMatrix::identity(3)).max_abs() < 1e-14);
        let zero = dilation_reconstruct(&dil, &ScalarMask::zeros(3)).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn optimized_random_pair() {
        let mut rng = random::seeded(7);
        let xs: Vec<_> = (0..4)
            .map(|_| random::gaussian_vector(&mut rng, 2))
            .collect();
        let ys: Vec<_> = (0..4)
            .map(|_| random::gaussian_vector(&mut rng, 2))
            .collect();
        let pair = FramePair::new(xs, ys).unwrap();
        let br = optimize(&pair, &OptimizeConfig::default()).unwrap();
        let dil = build_dilation(&pair, &br.weights, br.m_upper).unwrap();
        let (e1, e2) = dil.isometry_defects();
        assert!(e1 < 1e-10 && e2 < 1e-10, "{e1} {e2}");
        assert!(rank_one_residual(&pair, &dil).unwrap() < 1e-10);
        let ones = dilation_reconstruct(&dil, &ScalarMask::ones(4)).unwrap();
        assert!((&ones - &pair_operator(&pair)).max_abs() < 1e-10);
        let mask = ScalarMask::new(random::phases(&mut rng, 4)).unwrap();
        let rebuilt = dilation_reconstruct(&dil, &mask).unwrap();
        assert!((&rebuilt - &mask_matrix(&pair, &mask).unwrap()).max_abs() < 1e-10);
    }

    #[test]
    fn scale_below_bessel_is_rejected() {
        let pair = onb_pair(2);
        assert!(matches!(
            build_dilation(&pair, &LogWeights::zeros(2), 0.5),
            Err(RescaleError::PaddingNotPsd { family: "x", .. })
        ));
    }
}
