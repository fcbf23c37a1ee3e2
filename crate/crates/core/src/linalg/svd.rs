use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, Result};

const MAX_SWEEPS: usize = 100;

/// Thin SVD `A = U diag(σ) V*`, singular values descending.
///
/// For an `m × n` input, `U` is `m × r` and `V` is `n × r` with
/// `r = min(m, n)`. Columns of `U` belonging to zero singular values are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

/// Largest singular value with `M v = σ u`.
#[derive(Debug, Clone)]
pub struct SingularTriplet {
    pub sigma: f64,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(LinalgError::Empty);
    }
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            singular_values: t.singular_values,
            u: t.v,
            v: t.u,
        });
    }
    let m = a.rows();
    let n = a.cols();
    // Work column-major: cols[j] is column j of the evolving A·V.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v = ComplexMatrix::identity(n);

    let total: f64 = cols.iter().flatten().map(|z| z.norm_sqr()).sum();
    let rel_tol = m as f64 * f64::EPSILON;
    let abs_tol = f64::EPSILON * f64::EPSILON * total;
    let mut converged = n == 1;
    let mut sweep = 0;
    while !converged && sweep < MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let g = gamma.norm();
                if g == 0.0 || g <= rel_tol * (alpha * beta).sqrt() || g <= abs_tol {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let theta = (beta - alpha) / (2.0 * g);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                for i in 0..m {
                    let xp = cols[p][i];
                    let xq = cols[q][i];
                    cols[p][i] = xp * c + xq * jqp;
                    cols[q][i] = xp * s + xq * jqq;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * jqp;
                    v[(k, q)] = vkp * s + vkq * jqq;
                }
            }
        }
        sweep += 1;
        converged = !rotated;
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            method: "one-sided Jacobi SVD",
            sweeps: MAX_SWEEPS,
        });
    }

    let sigmas: Vec<f64> = cols.iter().map(|c| super::norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigmas[j].total_cmp(&sigmas[i]));
    let singular_values: Vec<f64> = order.iter().map(|&j| sigmas[j]).collect();
    let u = ComplexMatrix::from_fn(m, n, |i, j| {
        let src = order[j];
        if sigmas[src] > 0.0 {
            cols[src][i] / sigmas[src]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let v = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Svd {
        singular_values,
        u,
        v,
    })
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    svd(a).map(|s| s.singular_values)
}

/// Largest singular triplet. The zero matrix yields `σ = 0` with the first
/// standard basis vectors as witnesses.
///
/// `tol` bounds the accepted residual `‖M v − σ u‖ ≤ tol·(1 + σ)`.
pub fn top_singular_triplet(a: &ComplexMatrix, tol: f64) -> Result<SingularTriplet> {
    let s = svd(a)?;
    let sigma = s.singular_values[0];
    if sigma == 0.0 {
        return Ok(SingularTriplet {
            sigma,
            u: super::unit_basis(a.rows(), 0),
            v: super::unit_basis(a.cols(), 0),
        });
    }
    let v = s.v.column(0);
    // Recompute u from v so that M v = σ u holds to rounding.
    let mv = a.mul_vec(&v);
    let u: Vec<Complex64> = mv.iter().map(|z| z / sigma).collect();
    let residual = super::distance(&mv, &u.iter().map(|z| z * sigma).collect::<Vec<_>>());
    if residual > tol * (1.0 + sigma) {
        return Err(LinalgError::NoConvergence {
            method: "one-sided Jacobi SVD",
            sweeps: MAX_SWEEPS,
        });
    }
    Ok(SingularTriplet { sigma, u, v })
}

/// `‖M‖₁ = tr |M|`, the sum of singular values of a square matrix.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(singular_values(a)?.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_matrix() {
        let t = top_singular_triplet(&ComplexMatrix::zeros(3, 2), 1e-10).unwrap();
        assert_eq!(t.sigma, 0.0);
        assert_eq!(t.u.len(), 3);
        assert_eq!(t.v.len(), 2);
    }

    #[test]
    fn rank_one_triplet() {
        let x = vec![c(2.0, 0.0), c(0.0, 0.0)];
        let y = vec![c(0.0, 0.0), c(0.0, 3.0), c(0.0, 0.0)];
        let t = top_singular_triplet(&ComplexMatrix::outer(&x, &y), 1e-10).unwrap();
        assert!((t.sigma - 6.0).abs() < 1e-14);
        // u = x/2 and v = y/3 up to a common phase
        let phase_u = t.u[0] / c(1.0, 0.0);
        let phase_v = t.v[1] / c(0.0, 1.0);
        assert!((phase_u.norm() - 1.0).abs() < 1e-14);
        assert!((phase_u - phase_v).norm() < 1e-14);
    }

    #[test]
    fn trace_norm_identity_and_rank_one() {
        assert!((trace_norm(&ComplexMatrix::identity(5)).unwrap() - 5.0).abs() < 1e-14);
        let ones = [c(1.0, 0.0), c(1.0, 0.0)];
        let b = ComplexMatrix::from_fn(2, 2, |i, j| ones[i] * ones[j]);
        assert!((trace_norm(&b).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_rejects_rectangular() {
        assert!(matches!(
            trace_norm(&ComplexMatrix::zeros(2, 3)),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn wide_matrix_reconstructs() {
        let a = ComplexMatrix::new(
            2,
            3,
            vec![
                c(1.0, 2.0),
                c(0.0, -1.0),
                c(3.0, 0.5),
                c(-2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, 0.25),
            ],
        )
        .unwrap();
        let s = svd(&a).unwrap();
        let sigma = ComplexMatrix::from_diagonal(
            &s.singular_values
                .iter()
                .map(|&x| c(x, 0.0))
                .collect::<Vec<_>>(),
        );
        let rebuilt = &(&s.u * &sigma) * &s.v.adjoint();
        assert!((&rebuilt - &a).max_abs() < 1e-13);
    }
}
