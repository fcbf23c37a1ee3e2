//! Amplifications `Φ_(m)` acting entry-wise on `M_m(ℓ∞_n)`.

use num_complex::Complex64;

use super::{MultiplierError, Result, ScalarMask};
use crate::frames::FramePair;
use crate::linalg::{self, top_singular_triplet, ComplexMatrix};
use crate::random;

/// An element `A = (a_ij(k))` of `M_m(ℓ∞_n)`, stored as the `n` matrices
/// `A_k = (a_ij(k))_{i,j}`. Its norm is `max_k ‖A_k‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplifiedInput {
    m: usize,
    blocks: Vec<ComplexMatrix>,
}

impl AmplifiedInput {
    pub fn new(m: usize, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if m == 0 {
            return Err(MultiplierError::AmplifiedShape(
                "m must be at least 1".into(),
            ));
        }
        if let Some((k, b)) = blocks
            .iter()
            .enumerate()
            .find(|(_, b)| b.rows() != m || b.cols() != m)
        {
            return Err(MultiplierError::AmplifiedShape(format!(
                "block {k} is {}x{}, expected {m}x{m}",
                b.rows(),
                b.cols()
            )));
        }
        Ok(Self { m, blocks })
    }

    /// `A_k = I_m` for every `k`.
    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            m,
            blocks: vec![ComplexMatrix::identity(m); n],
        }
    }

    /// `A_k = ε_k I_m`; amplifies to `I_m ⊗ Φ(ε)`.
    pub fn diagonal_embedding(mask: &ScalarMask, m: usize) -> Self {
        Self {
            m,
            blocks: mask
                .entries()
                .iter()
                .map(|&e| ComplexMatrix::identity(m).scale(e))
                .collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// `max_k ‖A_k‖`.
    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(ComplexMatrix::op_norm)
            .fold(0.0, f64::max)
    }
}

fn check_blocks(pair: &FramePair, a: &AmplifiedInput) -> Result<()> {
    if a.blocks.len() != pair.len() {
        return Err(MultiplierError::AmplifiedShape(format!(
            "{} blocks for {} terms",
            a.blocks.len(),
            pair.len()
        )));
    }
    Ok(())
}

/// Component `i` of `Φ_(m)(A)(u_1, …, u_m)`, i.e.
/// `Σ_j Σ_k a_ij(k)⟨u_j, y_k⟩x_k`.
pub fn amplified_apply(
    pair: &FramePair,
    a: &AmplifiedInput,
    us: &[Vec<Complex64>],
) -> Result<Vec<Vec<Complex64>>> {
    check_blocks(pair, a)?;
    if us.len() != a.m {
        return Err(MultiplierError::AmplifiedShape(format!(
            "{} input vectors for m = {}",
            us.len(),
            a.m
        )));
    }
    if let Some(u) = us.iter().find(|u| u.len() != pair.dim()) {
        return Err(MultiplierError::VectorDimension {
            expected: pair.dim(),
            found: u.len(),
        });
    }
    // coeff[k][j] = ⟨u_j, y_k⟩
    let coeff: Vec<Vec<Complex64>> = pair
        .ys()
        .iter()
        .map(|y| us.iter().map(|u| linalg::inner(u, y)).collect())
        .collect();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); pair.dim()]; a.m];
    for (i, out_i) in out.iter_mut().enumerate() {
        for (k, x) in pair.xs().iter().enumerate() {
            let s: Complex64 = (0..a.m).map(|j| a.blocks[k][(i, j)] * coeff[k][j]).sum();
            linalg::axpy(s, x, out_i);
        }
    }
    Ok(out)
}

/// The `md × md` block matrix of `Φ_(m)(A)`, block `(i, j)` being
/// `Σ_k a_ij(k) x_k y_k*`.
pub fn amplified_matrix(pair: &FramePair, a: &AmplifiedInput) -> Result<ComplexMatrix> {
    check_blocks(pair, a)?;
    let (m, d) = (a.m, pair.dim());
    let mut big = ComplexMatrix::zeros(m * d, m * d);
    let terms: Vec<ComplexMatrix> = pair
        .xs()
        .iter()
        .zip(pair.ys())
        .map(|(x, y)| ComplexMatrix::outer(x, y))
        .collect();
    for i in 0..m {
        for j in 0..m {
            for (term, block) in terms.iter().zip(&a.blocks) {
                let c = block[(i, j)];
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r in 0..d {
                    for s in 0..d {
                        big[(i * d + r, j * d + s)] += c * term[(r, s)];
                    }
                }
            }
        }
    }
    Ok(big)
}

/// Sampled lower bound on `‖Φ‖_cb` at amplification level `m`.
///
/// Takes the maximum of `‖Φ_(m)(A)‖` over the all-identity input and
/// `samples` random inputs of norm one, alternating Haar-unitary blocks and
/// diagonal-phase blocks.
pub fn cb_lower_sampled(pair: &FramePair, m: usize, samples: usize, seed: u64) -> Result<f64> {
    cb_lower_sampled_with_masks(pair, m, samples, seed, &[])
}

/// As [`cb_lower_sampled`], additionally evaluating `A_k = ε_k I_m` for each
/// given mask.
pub fn cb_lower_sampled_with_masks(
    pair: &FramePair,
    m: usize,
    samples: usize,
    seed: u64,
    masks: &[ScalarMask],
) -> Result<f64> {
    if m == 0 {
        return Err(MultiplierError::AmplifiedShape(
            "m must be at least 1".into(),
        ));
    }
    let mut best = amplified_matrix(pair, &AmplifiedInput::identity(pair.len(), m))?.op_norm();
    for mask in masks {
        let a = AmplifiedInput::diagonal_embedding(mask, m);
        best = best.max(amplified_matrix(pair, &a)?.op_norm());
    }
    for s in 0..samples {
        let a = random_input(pair.len(), m, seed, s);
        best = best.max(amplified_matrix(pair, &a)?.op_norm());
    }
    Ok(best)
}

fn random_input(n: usize, m: usize, seed: u64, index: usize) -> AmplifiedInput {
    let mut rng = random::substream(seed, index as u64);
    let blocks = (0..n)
        .map(|_| {
            if index.is_multiple_of(2) {
                random::haar_unitary(&mut rng, m)
            } else {
                ComplexMatrix::from_diagonal(&random::phases(&mut rng, m))
            }
        })
        .collect();
    AmplifiedInput { m, blocks }
}

/// Lower bound on `‖Φ_(m)‖` by alternating ascent over contractions.
///
/// Given the top singular vectors `(u_j)`, `(v_i)` of `Φ_(m)(A)`, the best
/// contraction for term `k` maximises `Re Σ_ij a_ij(k) β_j α_i` with
/// `β_j = ⟨u_j, y_k⟩`, `α_i = ⟨x_k, v_i⟩`; it is the rank-one
/// `conj(α) β* / (‖α‖‖β‖)` and attains `‖α‖‖β‖`. The value never decreases.
/// Starts from the identity input followed by `starts − 1` random ones.
pub fn cb_lower_ascent(
    pair: &FramePair,
    m: usize,
    starts: usize,
    iters: usize,
    seed: u64,
) -> Result<f64> {
    if m == 0 {
        return Err(MultiplierError::AmplifiedShape(
            "m must be at least 1".into(),
        ));
    }
    let (n, d) = (pair.len(), pair.dim());
    let mut best: f64 = 0.0;
    for start in 0..starts.max(1) {
        let mut a = if start == 0 {
            AmplifiedInput::identity(n, m)
        } else {
            random_input(n, m, seed ^ 0x9e37_79b9_7f4a_7c15, start)
        };
        let mut value = 0.0;
        for _ in 0..iters.max(1) {
            let big = amplified_matrix(pair, &a)?;
            let triplet = top_singular_triplet(&big, linalg::DEFAULT_TOL)?;
            let gain = triplet.sigma - value;
            value = value.max(triplet.sigma);
            if triplet.sigma == 0.0 || gain <= 1e-13 * value {
                break;
            }
            // right vector = inputs u_j, left vector = outputs v_i
            let us: Vec<&[Complex64]> = triplet.v.chunks(d).collect();
            let vs: Vec<&[Complex64]> = triplet.u.chunks(d).collect();
            for (k, (x, y)) in pair.xs().iter().zip(pair.ys()).enumerate() {
                let beta: Vec<Complex64> = us.iter().map(|u| linalg::inner(u, y)).collect();
                let alpha: Vec<Complex64> = vs.iter().map(|v| linalg::inner(x, v)).collect();
                let (na, nb) = (linalg::norm(&alpha), linalg::norm(&beta));
                if na == 0.0 || nb == 0.0 {
                    continue;
                }
                a.blocks[k] =
                    ComplexMatrix::from_fn(m, m, |i, j| (alpha[i] * beta[j]).conj() / (na * nb));
            }
        }
        best = best.max(value);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::pair_operator;
    use crate::linalg::unit_basis;
    use crate::multiplier::apply;

    fn random_pair(seed: u64, n: usize, d: usize) -> FramePair {
        let mut rng = random::seeded(seed);
        let xs = (0..n)
            .map(|_| random::gaussian_vector(&mut rng, d))
            .collect();
        let ys = (0..n)
            .map(|_| random::gaussian_vector(&mut rng, d))
            .collect();
        FramePair::new(xs, ys).unwrap()
    }

    #[test]
    fn m_one_reduces_to_apply() {
        let pair = random_pair(1, 4, 3);
        let mut rng = random::seeded(2);
        let mask = ScalarMask::new(random::phases(&mut rng, 4)).unwrap();
        let a = AmplifiedInput::new(
            1,
            mask.entries()
                .iter()
                .map(|&e| ComplexMatrix::from_diagonal(&[e]))
                .collect(),
        )
        .unwrap();
        let u = random::gaussian_vector(&mut rng, 3);
        let out = amplified_apply(&pair, &a, std::slice::from_ref(&u)).unwrap();
        let direct = apply(&pair, &mask, &u).unwrap();
        assert!(linalg::distance(&out[0], &direct) < 1e-13);
    }

    #[test]
    fn identity_blocks_act_diagonally() {
        let pair = random_pair(3, 3, 2);
        let mut rng = random::seeded(4);
        let us: Vec<_> = (0..3)
            .map(|_| random::gaussian_vector(&mut rng, 2))
            .collect();
        let out = amplified_apply(&pair, &AmplifiedInput::identity(3, 3), &us).unwrap();
        for (o, u) in out.iter().zip(&us) {
            let direct = apply(&pair, &ScalarMask::ones(3), u).unwrap();
            assert!(linalg::distance(o, &direct) < 1e-13);
        }
    }

    #[test]
    fn apply_matches_block_assembly() {
        let pair = random_pair(5, 4, 3);
        let a = random_input(4, 3, 6, 0);
        let mut rng = random::seeded(7);
        let us: Vec<_> = (0..3)
            .map(|_| random::gaussian_vector(&mut rng, 3))
            .collect();
        let stacked: Vec<Complex64> = us.concat();
        let big = amplified_matrix(&pair, &a).unwrap();
        let via_matrix = big.mul_vec(&stacked);
        let via_apply = amplified_apply(&pair, &a, &us).unwrap().concat();
        assert!(linalg::distance(&via_matrix, &via_apply) < 1e-12);
    }

    #[test]
    fn single_identity_sample_is_pair_operator_norm() {
        let pair = random_pair(8, 3, 2);
        let v = cb_lower_sampled(&pair, 1, 0, 0).unwrap();
        assert!((v - pair_operator(&pair).op_norm()).abs() < 1e-13);
    }

    #[test]
    fn orthonormal_pair_is_completely_contractive() {
        let b: Vec<_> = (0..3).map(|k| unit_basis(3, k)).collect();
        let pair = FramePair::new(b.clone(), b).unwrap();
        for m in 1..4 {
            let v = cb_lower_sampled(&pair, m, 6, 1).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
            let w = cb_lower_ascent(&pair, m, 3, 50, 1).unwrap();
            assert!((w - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shape_errors() {
        let pair = random_pair(9, 2, 2);
        assert!(AmplifiedInput::new(0, vec![]).is_err());
        assert!(AmplifiedInput::new(2, vec![ComplexMatrix::identity(3)]).is_err());
        let a = AmplifiedInput::identity(3, 2);
        assert!(amplified_matrix(&pair, &a).is_err());
        let a = AmplifiedInput::identity(2, 2);
        assert!(amplified_apply(&pair, &a, &[vec![Complex64::new(1.0, 0.0); 2]]).is_err());
    }
}
