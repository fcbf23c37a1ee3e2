use num_complex::Complex64;

use super::{ComplexMatrix, HermitianMatrix, LinalgError, Result};

const MAX_SWEEPS: usize = 100;

/// Full eigendecomposition `M = V diag(values) V*` with eigenvalues ascending
/// and eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `V diag(f(λ)) V*`.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let v = self.vector(k);
            out.add_outer(Complex64::new(f(lambda), 0.0), &v, &v);
        }
        HermitianMatrix::hermitian_part(&out)
    }
}

#[derive(Debug, Clone)]
pub struct ExtremeEig {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub v_min: Vec<Complex64>,
    pub v_max: Vec<Complex64>,
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eigen(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = m.dim();
    if n == 0 {
        return Err(LinalgError::Empty);
    }
    let mut a = m.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = n == 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged && sweep < MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                if rotate(&mut a, &mut v, p, q, sweep, scale) {
                    rotated = true;
                }
            }
        }
        sweep += 1;
        converged = !rotated || off_diagonal_norm(&a) <= f64::MIN_POSITIVE.sqrt() * scale;
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            method: "Hermitian Jacobi",
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`. Returns false when the entry
/// was already negligible.
fn rotate(
    a: &mut ComplexMatrix,
    v: &mut ComplexMatrix,
    p: usize,
    q: usize,
    sweep: usize,
    scale: f64,
) -> bool {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return false;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Rutishauser: after a few sweeps, drop entries below the diagonal's ulp.
    if g <= f64::MIN_POSITIVE * scale
        || (sweep > 3 && app.abs() + 100.0 * g == app.abs() && aqq.abs() + 100.0 * g == aqq.abs())
    {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return false;
    }

    let phase = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * g, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * g, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    true
}

/// Smallest and largest eigenpairs.
///
/// The Jacobi solver converges to machine precision, so `tol` only bounds
/// the accepted residual; a residual above `tol·(1 + |λ|)·‖M‖_F` is reported
/// as a convergence failure.
pub fn hermitian_extreme_eig(m: &HermitianMatrix, tol: f64) -> Result<ExtremeEig> {
    let eig = hermitian_eigen(m)?;
    let n = eig.values.len();
    let out = ExtremeEig {
        lambda_min: eig.values[0],
        lambda_max: eig.values[n - 1],
        v_min: eig.vector(0),
        v_max: eig.vector(n - 1),
    };
    let scale = 1.0 + m.as_matrix().frobenius_norm();
    for (lambda, v) in [(out.lambda_min, &out.v_min), (out.lambda_max, &out.v_max)] {
        let mv = m.as_matrix().mul_vec(v);
        let residual = super::distance(&mv, &v.iter().map(|z| z * lambda).collect::<Vec<_>>());
        if residual > tol * (1.0 + lambda.abs()) * scale {
            return Err(LinalgError::NoConvergence {
                method: "Hermitian Jacobi",
                sweeps: MAX_SWEEPS,
            });
        }
    }
    Ok(out)
}

/// Principal square root of a positive semidefinite matrix. Eigenvalues in
/// `[-tol, 0)` are clamped to zero.
pub fn psd_sqrt(m: &HermitianMatrix, tol: f64) -> Result<HermitianMatrix> {
    let eig = hermitian_eigen(m)?;
    let min = eig.values[0];
    if min < -tol {
        return Err(LinalgError::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.reassemble(|lambda| lambda.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn herm(n: usize, data: Vec<Complex64>) -> HermitianMatrix {
        HermitianMatrix::new(ComplexMatrix::new(n, n, data).unwrap()).unwrap()
    }

    #[test]
    fn identity_extremes() {
        let e = hermitian_extreme_eig(&HermitianMatrix::identity(3), 1e-10).unwrap();
        assert_eq!(e.lambda_min, 1.0);
        assert_eq!(e.lambda_max, 1.0);
        assert!((super::super::norm(&e.v_max) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_extremes() {
        let m = herm(2, vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let e = hermitian_extreme_eig(&m, 1e-10).unwrap();
        assert_eq!((e.lambda_min, e.lambda_max), (0.0, 2.0));
        assert!((e.v_max[1].norm() - 1.0).abs() < 1e-15);
        assert!((e.v_min[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_closed_form() {
        // eigenvalues of [[3/2, 1/2], [1/2, 1/2]]: tr/2 ± sqrt(tr²/4 - det)
        let m = herm(2, vec![c(1.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)]);
        let (tr, det) = (2.0_f64, 0.75 - 0.25);
        let disc = (tr * tr / 4.0 - det).sqrt();
        let e = hermitian_extreme_eig(&m, 1e-10).unwrap();
        assert!((e.lambda_max - (tr / 2.0 + disc)).abs() < 1e-14);
        assert!((e.lambda_min - (tr / 2.0 - disc)).abs() < 1e-14);
        assert!((e.lambda_max - (1.0 + 0.5_f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn complex_two_by_two_closed_form() {
        let b = c(0.3, -1.2);
        let m = herm(2, vec![c(2.0, 0.0), b, b.conj(), c(-1.0, 0.0)]);
        let (tr, det) = (1.0_f64, -2.0 - b.norm_sqr());
        let disc = (tr * tr / 4.0 - det).sqrt();
        let eig = hermitian_eigen(&m).unwrap();
        assert!((eig.values[1] - (tr / 2.0 + disc)).abs() < 1e-14);
        assert!((eig.values[0] - (tr / 2.0 - disc)).abs() < 1e-14);
    }

    #[test]
    fn psd_sqrt_of_diagonal() {
        let m = herm(2, vec![c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(9.0, 0.0)]);
        let r = psd_sqrt(&m, 1e-10).unwrap();
        assert!((r[(0, 0)].re - 2.0).abs() < 1e-14);
        assert!((r[(1, 1)].re - 3.0).abs() < 1e-14);
        assert!(r[(0, 1)].norm() < 1e-14);
        let id = psd_sqrt(&HermitianMatrix::identity(4), 1e-10).unwrap();
        assert!((id.as_matrix() - &ComplexMatrix::identity(4)).max_abs() < 1e-15);
    }

    #[test]
    fn psd_sqrt_rejects_negative() {
        let m = herm(
            2,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1e-3, 0.0)],
        );
        assert!(matches!(
            psd_sqrt(&m, 1e-10),
            Err(LinalgError::NotPsd { .. })
        ));
        let tiny = herm(
            2,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1e-12, 0.0)],
        );
        let r = psd_sqrt(&tiny, 1e-10).unwrap();
        assert_eq!(r[(1, 1)].re, 0.0);
    }

    #[test]
    fn empty_is_rejected() {
        let m = HermitianMatrix::new(ComplexMatrix::zeros(0, 0)).unwrap();
        assert!(matches!(hermitian_eigen(&m), Err(LinalgError::Empty)));
    }
}
