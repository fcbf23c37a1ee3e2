//! Single-instance checks of the inequalities behind the main estimate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rademacher::{RademacherEnsemble, KHINTCHINE_GAMMA};
use super::{Result, VerifyError, IDENTITY_TOL, INEQUALITY_TOL};
use crate::frames::FramePair;
use crate::linalg::{self, singular_values, trace_norm, ComplexMatrix};
use crate::multiplier::{amplified_apply, AmplifiedInput};

/// Largest `m` for which the Rademacher chain is enumerated.
pub const MAX_CHAIN: usize = 10;

/// `rhs − lhs` for an inequality `lhs ≤ rhs`, judged relative to `scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub scale: f64,
    pub passed: bool,
}

impl InequalityCheck {
    pub fn new(lhs: f64, rhs: f64, scale: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            lhs,
            rhs,
            slack,
            scale,
            passed: slack >= -INEQUALITY_TOL * scale.max(f64::MIN_POSITIVE),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceLemmaReport {
    /// `‖α‖·‖β‖`.
    pub closed_form: f64,
    /// Sum of singular values of `(α_i β_j)`.
    pub svd_value: f64,
    pub relative_error: f64,
    pub passed: bool,
}

/// Trace norm of the rank-one matrix `(α_i β_j)` against `‖α‖‖β‖`.
pub fn trace_lemma_check(alpha: &[Complex64], beta: &[Complex64]) -> Result<TraceLemmaReport> {
    if alpha.is_empty() || alpha.len() != beta.len() {
        return Err(VerifyError::Shape(format!(
            "need equal nonzero lengths, got {} and {}",
            alpha.len(),
            beta.len()
        )));
    }
    let m = alpha.len();
    let b = ComplexMatrix::from_fn(m, m, |i, j| alpha[i] * beta[j]);
    let closed_form = linalg::norm(alpha) * linalg::norm(beta);
    let svd_value = trace_norm(&b)?;
    let relative_error = (closed_form - svd_value).abs() / closed_form.max(f64::MIN_POSITIVE);
    Ok(TraceLemmaReport {
        closed_form,
        svd_value,
        relative_error,
        passed: relative_error <= IDENTITY_TOL || (closed_form == 0.0 && svd_value == 0.0),
    })
}

/// `Σ_k |⟨u, y_k⟩||⟨v, x_k⟩| ≤ ‖Φ‖·‖u‖‖v‖`.
///
/// Choosing `a(k)` to align the phases of the terms turns the left side into
/// `⟨Φ(a)u, v⟩`.
pub fn key_simple_check(
    pair: &FramePair,
    u: &[Complex64],
    v: &[Complex64],
    phi_norm: f64,
) -> Result<InequalityCheck> {
    check_dims(pair, [u, v])?;
    let lhs: f64 = pair
        .xs()
        .iter()
        .zip(pair.ys())
        .map(|(x, y)| linalg::inner(u, y).norm() * linalg::inner(v, x).norm())
        .sum();
    let rhs = phi_norm * linalg::norm(u) * linalg::norm(v);
    Ok(InequalityCheck::new(lhs, rhs, rhs.max(lhs)))
}

/// The averaged chain between the key estimate's two sides, with
/// `U(s) = Σ_j r_j(s) u_j` and `V(t) = Σ_i r_i(t) v_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RademacherChain {
    /// `γ² Σ_k (Σ_j |⟨u_j,y_k⟩|²)^{1/2}(Σ_i |⟨v_i,x_k⟩|²)^{1/2}`.
    pub khintchine_lower: f64,
    /// `E_s E_t Σ_k |⟨U(s), y_k⟩||⟨V(t), x_k⟩|`.
    pub bilinear_average: f64,
    /// `‖Φ‖ · E_s‖U(s)‖ · E_t‖V(t)‖`.
    pub norm_product: f64,
    /// `‖Φ‖ (Σ‖u_j‖²)^{1/2}(Σ‖v_i‖²)^{1/2}`.
    pub l2_bound: f64,
    /// `|E‖U‖² − Σ‖u_j‖²| + |E‖V‖² − Σ‖v_i‖²|`.
    pub l2_identity_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperKeyReport {
    pub check: InequalityCheck,
    /// Absent when `m` exceeds [`MAX_CHAIN`].
    pub chain: Option<RademacherChain>,
}

impl SuperKeyReport {
    pub fn passed(&self) -> bool {
        self.check.passed && self.chain.is_none_or(|c| c.passed)
    }
}

/// `Σ_k (Σ_j |⟨u_j,y_k⟩|²)^{1/2}(Σ_i |⟨v_i,x_k⟩|²)^{1/2}
///  ≤ 2‖Φ‖ (Σ_j ‖u_j‖²)^{1/2}(Σ_i ‖v_i‖²)^{1/2}`.
pub fn super_key_check(
    pair: &FramePair,
    us: &[Vec<Complex64>],
    vs: &[Vec<Complex64>],
    phi_norm: f64,
) -> Result<SuperKeyReport> {
    check_dims(pair, us.iter().chain(vs).map(Vec::as_slice))?;
    let mut lhs = 0.0;
    for (x, y) in pair.xs().iter().zip(pair.ys()) {
        let a: f64 = us.iter().map(|u| linalg::inner(u, y).norm_sqr()).sum();
        let b: f64 = vs.iter().map(|v| linalg::inner(v, x).norm_sqr()).sum();
        lhs += a.sqrt() * b.sqrt();
    }
    let su: f64 = us.iter().map(|u| linalg::norm(u).powi(2)).sum();
    let sv: f64 = vs.iter().map(|v| linalg::norm(v).powi(2)).sum();
    let l2_bound = phi_norm * su.sqrt() * sv.sqrt();
    let rhs = l2_bound / (KHINTCHINE_GAMMA * KHINTCHINE_GAMMA);
    let check = InequalityCheck::new(lhs, rhs, rhs.max(lhs));
    let chain = if us.len() <= MAX_CHAIN && vs.len() <= MAX_CHAIN {
        Some(rademacher_chain(pair, us, vs, phi_norm, lhs, su, sv)?)
    } else {
        None
    };
    Ok(SuperKeyReport { check, chain })
}

fn rademacher_chain(
    pair: &FramePair,
    us: &[Vec<Complex64>],
    vs: &[Vec<Complex64>],
    phi_norm: f64,
    key_lhs: f64,
    su: f64,
    sv: f64,
) -> Result<RademacherChain> {
    let eu = RademacherEnsemble::new(us.len())?;
    let ev = RademacherEnsemble::new(vs.len())?;
    // s and t are independent, so the double average factorizes per term.
    let mut bilinear_average = 0.0;
    for (x, y) in pair.xs().iter().zip(pair.ys()) {
        let cu: Vec<Complex64> = us.iter().map(|u| linalg::inner(u, y)).collect();
        let cv: Vec<Complex64> = vs.iter().map(|v| linalg::inner(v, x)).collect();
        bilinear_average += eu.mean_abs(&cu) * ev.mean_abs(&cv);
    }
    let (mu1, mu2) = eu.mean_norms(us);
    let (mv1, mv2) = ev.mean_norms(vs);
    let khintchine_lower = KHINTCHINE_GAMMA * KHINTCHINE_GAMMA * key_lhs;
    let norm_product = phi_norm * mu1 * mv1;
    let l2_bound = phi_norm * su.sqrt() * sv.sqrt();
    let l2_identity_residual = (mu2 - su).abs() + (mv2 - sv).abs();
    let scale = l2_bound.max(bilinear_average).max(f64::MIN_POSITIVE);
    let tol = INEQUALITY_TOL * scale;
    let passed = khintchine_lower <= bilinear_average + tol
        && bilinear_average <= norm_product + tol
        && norm_product <= l2_bound + tol
        && l2_identity_residual <= IDENTITY_TOL * (su + sv).max(1.0);
    Ok(RademacherChain {
        khintchine_lower,
        bilinear_average,
        norm_product,
        l2_bound,
        l2_identity_residual,
        passed,
    })
}

/// `B_k = (⟨u_j, y_k⟩⟨x_k, v_i⟩)_{i,j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneBlock(ComplexMatrix);

impl RankOneBlock {
    pub fn new(pair: &FramePair, k: usize, us: &[Vec<Complex64>], vs: &[Vec<Complex64>]) -> Self {
        let (x, y) = (&pair.xs()[k], &pair.ys()[k]);
        let beta: Vec<Complex64> = us.iter().map(|u| linalg::inner(u, y)).collect();
        let alpha: Vec<Complex64> = vs.iter().map(|v| linalg::inner(x, v)).collect();
        Self(ComplexMatrix::from_fn(alpha.len(), beta.len(), |i, j| {
            alpha[i] * beta[j]
        }))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// `σ₂/σ₁`, zero for the zero block.
    pub fn rank_defect(&self) -> Result<f64> {
        let s = singular_values(&self.0)?;
        Ok(match s.as_slice() {
            [s1, s2, ..] if *s1 > 0.0 => s2 / s1,
            _ => 0.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePairingReport {
    /// `Σ_k tr(A_k B_kᵗ)`.
    pub trace_route: Complex64,
    /// `Σ_{k,i,j} a_ij(k)⟨u_j, y_k⟩⟨x_k, v_i⟩`.
    pub sum_route: Complex64,
    /// `Σ_i ⟨(Φ_(m)(A)u)_i, v_i⟩`.
    pub operator_route: Complex64,
    pub residual: f64,
    pub largest_rank_defect: f64,
    pub passed: bool,
}

/// Three evaluations of the pairing between `Φ_(m)(A)` and `(u_j)`, `(v_i)`.
pub fn trace_pairing_check(
    pair: &FramePair,
    a: &AmplifiedInput,
    us: &[Vec<Complex64>],
    vs: &[Vec<Complex64>],
) -> Result<TracePairingReport> {
    let m = a.m();
    if us.len() != m || vs.len() != m || a.blocks().len() != pair.len() {
        return Err(VerifyError::Shape(format!(
            "m = {m} with {} inputs, {} outputs and {} blocks for {} terms",
            us.len(),
            vs.len(),
            a.blocks().len(),
            pair.len()
        )));
    }
    check_dims(pair, us.iter().chain(vs).map(Vec::as_slice))?;
    let zero = Complex64::new(0.0, 0.0);
    let mut trace_route = zero;
    let mut largest_rank_defect: f64 = 0.0;
    let mut scale = 0.0;
    for (k, ak) in a.blocks().iter().enumerate() {
        let b = RankOneBlock::new(pair, k, us, vs);
        largest_rank_defect = largest_rank_defect.max(b.rank_defect()?);
        trace_route += (ak * &b.matrix().transpose()).trace();
        scale += ak.frobenius_norm() * b.matrix().frobenius_norm();
    }
    let mut sum_route = zero;
    for (k, (x, y)) in pair.xs().iter().zip(pair.ys()).enumerate() {
        for i in 0..m {
            for j in 0..m {
                sum_route +=
                    a.blocks()[k][(i, j)] * linalg::inner(&us[j], y) * linalg::inner(x, &vs[i]);
            }
        }
    }
    let out = amplified_apply(pair, a, us)?;
    let operator_route: Complex64 = out.iter().zip(vs).map(|(o, v)| linalg::inner(o, v)).sum();
    let residual = (trace_route - sum_route)
        .norm()
        .max((operator_route - sum_route).norm());
    Ok(TracePairingReport {
        trace_route,
        sum_route,
        operator_route,
        residual,
        largest_rank_defect,
        passed: residual <= IDENTITY_TOL * scale.max(1.0),
    })
}

/// `|tr(AB)| ≤ ‖A‖·‖B‖₁`.
pub fn holder_trace_check(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<InequalityCheck> {
    if !a.is_square() || a.rows() != b.cols() || a.cols() != b.rows() {
        return Err(VerifyError::Shape(format!(
            "{}x{} times {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let lhs = (a * b).trace().norm();
    let rhs = a.op_norm() * trace_norm(b)?;
    Ok(InequalityCheck::new(lhs, rhs, rhs.max(lhs)))
}

fn check_dims<'a>(pair: &FramePair, vs: impl IntoIterator<Item = &'a [Complex64]>) -> Result<()> {
    match vs.into_iter().find(|v| v.len() != pair.dim()) {
        Some(v) => Err(VerifyError::Shape(format!(
            "vector of length {} for dimension {}",
            v.len(),
            pair.dim()
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_basis;
    use crate::random;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn onb_pair(d: usize) -> FramePair {
        let b: Vec<_> = (0..d).map(|k| unit_basis(d, k)).collect();
        FramePair::new(b.clone(), b).unwrap()
    }

    #[test]
    fn trace_lemma_small_cases() {
        let e1 = unit_basis(3, 0);
        let r = trace_lemma_check(&e1, &e1).unwrap();
        assert_eq!((r.closed_form, r.passed), (1.0, true));
        assert!((r.svd_value - 1.0).abs() < 1e-14);
        let r = trace_lemma_check(&[c(1.0), c(1.0)], &[c(1.0), c(1.0)]).unwrap();
        assert!((r.closed_form - 2.0).abs() < 1e-15 && (r.svd_value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn key_simple_equality_and_orthogonal_cases() {
        let pair = onb_pair(2);
        let e1 = unit_basis(2, 0);
        let r = key_simple_check(&pair, &e1, &e1, 1.0).unwrap();
        assert_eq!(r.slack, 0.0);
        // u ⊥ every y_k is impossible for a spanning family; use a
        // degenerate pair instead.
        let thin = FramePair::new(vec![unit_basis(2, 0)], vec![unit_basis(2, 0)]).unwrap();
        let u = unit_basis(2, 1);
        let r = key_simple_check(&thin, &u, &e1, 1.0).unwrap();
        assert_eq!((r.lhs, r.slack), (0.0, 1.0));
    }

    #[test]
    fn super_key_orthonormal() {
        let pair = onb_pair(3);
        let b: Vec<_> = (0..3).map(|k| unit_basis(3, k)).collect();
        let r = super_key_check(&pair, &b, &b, 1.0).unwrap();
        assert!((r.check.lhs - 3.0).abs() < 1e-15);
        assert!((r.check.rhs - 6.0).abs() < 1e-14);
        assert!(r.passed());
    }

    #[test]
    fn super_key_m_one_doubles_simple() {
        let mut rng = random::seeded(5);
        let pair = FramePair::new(
            (0..3)
                .map(|_| random::gaussian_vector(&mut rng, 2))
                .collect(),
            (0..3)
                .map(|_| random::gaussian_vector(&mut rng, 2))
                .collect(),
        )
        .unwrap();
        let u = random::gaussian_vector(&mut rng, 2);
        let v = random::gaussian_vector(&mut rng, 2);
        let simple = key_simple_check(&pair, &u, &v, 1.7).unwrap();
        let sup = super_key_check(&pair, &[u], &[v], 1.7).unwrap();
        assert!((simple.lhs - sup.check.lhs).abs() < 1e-14);
        assert!((2.0 * simple.rhs - sup.check.rhs).abs() < 1e-13);
    }

    #[test]
    fn holder_equality_cases() {
        let id = ComplexMatrix::identity(3);
        let r = holder_trace_check(&id, &id).unwrap();
        assert!(r.slack.abs() < 1e-13);
        let mut rng = random::seeded(11);
        let u = random::haar_unitary(&mut rng, 3);
        let r = holder_trace_check(&u, &u.adjoint()).unwrap();
        assert!(r.slack.abs() < 1e-12 && r.passed);
    }

    #[test]
    fn trace_pairing_zero_and_m_one() {
        let mut rng = random::seeded(2);
        let pair = FramePair::new(
            (0..4)
                .map(|_| random::gaussian_vector(&mut rng, 3))
                .collect(),
            (0..4)
                .map(|_| random::gaussian_vector(&mut rng, 3))
                .collect(),
        )
        .unwrap();
        let us = vec![random::gaussian_vector(&mut rng, 3)];
        let vs = vec![random::gaussian_vector(&mut rng, 3)];
        let zero = AmplifiedInput::new(1, vec![ComplexMatrix::zeros(1, 1); 4]).unwrap();
        let r = trace_pairing_check(&pair, &zero, &us, &vs).unwrap();
        assert_eq!(r.sum_route, Complex64::new(0.0, 0.0));
        let ones = AmplifiedInput::identity(4, 1);
        let r = trace_pairing_check(&pair, &ones, &us, &vs).unwrap();
        let direct = linalg::inner(&crate::frames::pair_operator(&pair).mul_vec(&us[0]), &vs[0]);
        assert!((r.operator_route - direct).norm() < 1e-12);
        assert!(r.passed);
    }
}
