//! The multiplier map `Φ: ℓ∞_n → B(ℂ^d)`, `Φ(a)u = Σ a(k)⟨u, y_k⟩x_k`.
//!
//! `‖Φ‖` is the supremum of `‖Φ(ε)‖` over masks with `|ε_k| ≤ 1`; since the
//! operator norm is convex in `ε` the supremum sits on the torus `|ε_k| = 1`.
//! Two estimators are provided: a fast alternating ascent and an exhaustive
//! phase-grid enumeration for small `n`. Both return self-certifying lower
//! bounds (`value = Re ⟨Φ(ε)u, v⟩` at the stored witness).

mod amplify;
mod grid;

pub use amplify::{
    amplified_apply, amplified_matrix, cb_lower_ascent, cb_lower_sampled,
    cb_lower_sampled_with_masks, AmplifiedInput,
};
pub use grid::{grid_upper_factor, norm_oracle_grid, MAX_GRID_TERMS, MIN_PHASE_STEPS};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::frames::FramePair;
use crate::linalg::{self, top_singular_triplet, ComplexMatrix, LinalgError};
use crate::random;

/// Slack on `|ε_k| ≤ 1`.
pub const MASK_TOL: f64 = 1e-12;

pub const DEFAULT_RESTARTS: usize = 8;
pub const DEFAULT_ALTERNATING_ITERS: usize = 500;
pub const DEFAULT_ALTERNATING_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MultiplierError {
    #[error("mask has {found} entries, pair has {expected}")]
    MaskLength { expected: usize, found: usize },
    #[error("mask entry {index} has modulus {modulus} > 1")]
    MaskEntry { index: usize, modulus: f64 },
    #[error("vector has dimension {found}, expected {expected}")]
    VectorDimension { expected: usize, found: usize },
    #[error("phase grid needs n ≤ {max}, got n = {n}")]
    TooManyTerms { n: usize, max: usize },
    #[error("phase grid needs at least {min} steps, got {steps}")]
    TooFewPhaseSteps { steps: usize, min: usize },
    #[error("amplified input: {0}")]
    AmplifiedShape(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, MultiplierError>;

/// Scalars `ε_k` with `|ε_k| ≤ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarMask(Vec<Complex64>);

impl ScalarMask {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        for (index, z) in entries.iter().enumerate() {
            let modulus = z.norm();
            if !(modulus <= 1.0 + MASK_TOL) {
                return Err(MultiplierError::MaskEntry { index, modulus });
            }
        }
        Ok(Self(entries))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    /// Indicator of coordinate `k`.
    pub fn basis(n: usize, k: usize) -> Self {
        Self(linalg::unit_basis(n, k))
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rounds each phase to the nearest of `steps` equally spaced angles.
    pub fn rounded_to_grid(&self, steps: usize) -> Self {
        let step = std::f64::consts::TAU / steps as f64;
        Self(
            self.0
                .iter()
                .map(|z| {
                    let j = (z.arg() / step).round();
                    Complex64::from_polar(1.0, j * step)
                })
                .collect(),
        )
    }
}

fn check_mask(pair: &FramePair, mask: &ScalarMask) -> Result<()> {
    if mask.len() != pair.len() {
        return Err(MultiplierError::MaskLength {
            expected: pair.len(),
            found: mask.len(),
        });
    }
    Ok(())
}

/// `Φ(a)u = Σ_k a(k)⟨u, y_k⟩x_k`.
pub fn apply(pair: &FramePair, a: &ScalarMask, u: &[Complex64]) -> Result<Vec<Complex64>> {
    check_mask(pair, a)?;
    if u.len() != pair.dim() {
        return Err(MultiplierError::VectorDimension {
            expected: pair.dim(),
            found: u.len(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); pair.dim()];
    for ((x, y), ak) in pair.xs().iter().zip(pair.ys()).zip(a.entries()) {
        linalg::axpy(ak * linalg::inner(u, y), x, &mut out);
    }
    Ok(out)
}

/// `Φ(ε) = Σ_k ε_k x_k y_k*` as a `d × d` matrix.
pub fn mask_matrix(pair: &FramePair, eps: &ScalarMask) -> Result<ComplexMatrix> {
    check_mask(pair, eps)?;
    let d = pair.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for ((x, y), e) in pair.xs().iter().zip(pair.ys()).zip(eps.entries()) {
        m.add_outer(*e, x, y);
    }
    Ok(m)
}

/// `c_k = ⟨u, y_k⟩⟨x_k, v⟩`, so that `⟨Φ(a)u, v⟩ = Σ a(k) c_k`.
pub fn bilinear_terms(pair: &FramePair, u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    pair.xs()
        .iter()
        .zip(pair.ys())
        .map(|(x, y)| linalg::inner(u, y) * linalg::inner(x, v))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    Alternating,
    Grid,
    Sampled,
}

/// A certified lower bound on `‖Φ‖` with its witness `(u, v, ε)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiplierNormEstimate {
    pub value: f64,
    pub witness_u: Vec<Complex64>,
    pub witness_v: Vec<Complex64>,
    pub witness_mask: ScalarMask,
    pub method: EstimateMethod,
}

impl MultiplierNormEstimate {
    /// Recomputes `Re Σ ε_k ⟨u, y_k⟩⟨x_k, v⟩` at the witness.
    pub fn certificate_value(&self, pair: &FramePair) -> f64 {
        bilinear_terms(pair, &self.witness_u, &self.witness_v)
            .iter()
            .zip(self.witness_mask.entries())
            .map(|(c, e)| (c * e).re)
            .sum()
    }

    pub(crate) fn from_mask(
        pair: &FramePair,
        mask: ScalarMask,
        method: EstimateMethod,
    ) -> Result<Self> {
        let triplet = top_singular_triplet(&mask_matrix(pair, &mask)?, linalg::DEFAULT_TOL)?;
        Ok(Self {
            value: triplet.sigma,
            // Φ(ε) v_right = σ u_left: the input witness is the right vector.
            witness_u: triplet.v,
            witness_v: triplet.u,
            witness_mask: mask,
            method,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingConfig {
    pub restarts: usize,
    pub iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for AlternatingConfig {
    fn default() -> Self {
        Self {
            restarts: DEFAULT_RESTARTS,
            iters: DEFAULT_ALTERNATING_ITERS,
            tol: DEFAULT_ALTERNATING_TOL,
            seed: 0,
        }
    }
}

/// One alternating run from `initial`. Returns the final estimate and the
/// value after every singular-vector step (nondecreasing).
///
/// Each round takes the top singular pair of `Φ(ε)`, then rotates every
/// `ε_k` so that `ε_k⟨u, y_k⟩⟨x_k, v⟩ ≥ 0`. Terms that vanish keep their
/// previous phase. Stops once a round gains less than `tol` relative.
pub fn alternating_ascent(
    pair: &FramePair,
    initial: ScalarMask,
    iters: usize,
    tol: f64,
) -> Result<(MultiplierNormEstimate, Vec<f64>)> {
    let mut estimate =
        MultiplierNormEstimate::from_mask(pair, initial, EstimateMethod::Alternating)?;
    let mut history = vec![estimate.value];
    for _ in 0..iters {
        let terms = bilinear_terms(pair, &estimate.witness_u, &estimate.witness_v);
        let scale = terms.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mask: Vec<Complex64> = terms
            .iter()
            .zip(estimate.witness_mask.entries())
            .map(|(c, prev)| {
                let r = c.norm();
                if r <= f64::EPSILON * scale || r == 0.0 {
                    *prev
                } else {
                    c.conj() / r
                }
            })
            .collect();
        let next =
            MultiplierNormEstimate::from_mask(pair, ScalarMask(mask), EstimateMethod::Alternating)?;
        let gain = next.value - estimate.value;
        history.push(next.value);
        if next.value >= estimate.value {
            estimate = next;
        }
        if gain <= tol * estimate.value.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok((estimate, history))
}

/// Best alternating estimate over `restarts` seeded starts. The first start
/// is the all-ones mask, the rest are uniformly random phases.
pub fn norm_lower_alternating(
    pair: &FramePair,
    restarts: usize,
    iters: usize,
    tol: f64,
) -> Result<MultiplierNormEstimate> {
    norm_lower_alternating_with(
        pair,
        &AlternatingConfig {
            restarts,
            iters,
            tol,
            seed: 0,
        },
    )
}

pub fn norm_lower_alternating_with(
    pair: &FramePair,
    cfg: &AlternatingConfig,
) -> Result<MultiplierNormEstimate> {
    let mut best: Option<MultiplierNormEstimate> = None;
    for r in 0..cfg.restarts.max(1) {
        let start = if r == 0 {
            ScalarMask::ones(pair.len())
        } else {
            let mut rng = random::substream(cfg.seed, r as u64);
            ScalarMask(random::phases(&mut rng, pair.len()))
        };
        let (estimate, _) = alternating_ascent(pair, start, cfg.iters, cfg.tol)?;
        if best.as_ref().is_none_or(|b| estimate.value > b.value) {
            best = Some(estimate);
        }
    }
    Ok(best.expect("at least one restart"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_basis;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn onb_pair(d: usize) -> FramePair {
        let b: Vec<_> = (0..d).map(|k| unit_basis(d, k)).collect();
        FramePair::new(b.clone(), b).unwrap()
    }

    fn small_pair() -> FramePair {
        FramePair::new(
            vec![
                vec![c(1.0, 0.5), c(-0.3, 0.0)],
                vec![c(0.2, -1.0), c(0.7, 0.1)],
                vec![c(0.0, 1.0), c(1.0, 1.0)],
            ],
            vec![
                vec![c(0.4, 0.0), c(1.0, -0.2)],
                vec![c(-1.1, 0.3), c(0.5, 0.0)],
                vec![c(0.3, 0.3), c(-0.6, 0.9)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn mask_validation() {
        assert!(ScalarMask::new(vec![c(1.0, 0.0), c(0.6, 0.8)]).is_ok());
        assert!(matches!(
            ScalarMask::new(vec![c(1.0, 0.1)]),
            Err(MultiplierError::MaskEntry { index: 0, .. })
        ));
        assert!(ScalarMask::new(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn apply_all_ones_on_orthonormal_pair_is_identity() {
        let pair = onb_pair(3);
        let u = vec![c(0.3, 1.0), c(-2.0, 0.0), c(0.0, 0.5)];
        assert_eq!(apply(&pair, &ScalarMask::ones(3), &u).unwrap(), u);
    }

    #[test]
    fn apply_single_coordinate() {
        let pair = small_pair();
        let u = vec![c(0.3, -0.2), c(1.0, 0.4)];
        let out = apply(&pair, &ScalarMask::basis(3, 0), &u).unwrap();
        let coeff = linalg::inner(&u, &pair.ys()[0]);
        for (o, x) in out.iter().zip(&pair.xs()[0]) {
            assert!((o - coeff * x).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_rejects_bad_shapes() {
        let pair = small_pair();
        assert!(matches!(
            apply(&pair, &ScalarMask::ones(2), &[c(1.0, 0.0), c(0.0, 0.0)]),
            Err(MultiplierError::MaskLength {
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            apply(&pair, &ScalarMask::ones(3), &[c(1.0, 0.0)]),
            Err(MultiplierError::VectorDimension { .. })
        ));
    }

    #[test]
    fn mask_matrix_zero_and_ones() {
        let pair = small_pair();
        assert_eq!(
            mask_matrix(&pair, &ScalarMask::zeros(3)).unwrap().max_abs(),
            0.0
        );
        let ones = mask_matrix(&pair, &ScalarMask::ones(3)).unwrap();
        assert!((&ones - &crate::frames::pair_operator(&pair)).max_abs() < 1e-15);
    }

    #[test]
    fn alternating_on_orthonormal_pair() {
        let est = norm_lower_alternating(&onb_pair(4), 4, 100, 1e-13).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alternating_scalar_bidisc() {
        let pair = FramePair::new(vec![vec![c(1.0, 0.0)]; 2], vec![vec![c(1.0, 0.0)]; 2]).unwrap();
        let est = norm_lower_alternating(&pair, 3, 100, 1e-13).unwrap();
        assert!((est.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn alternating_is_monotone_and_certified() {
        let pair = small_pair();
        let mut rng = random::seeded(11);
        for _ in 0..5 {
            let start = ScalarMask(random::phases(&mut rng, 3));
            let (est, history) = alternating_ascent(&pair, start, 200, 1e-14).unwrap();
            for w in history.windows(2) {
                assert!(w[1] >= w[0] - 1e-12 * w[0], "{history:?}");
            }
            assert!((est.certificate_value(&pair) - est.value).abs() < 1e-10);
        }
    }
}
