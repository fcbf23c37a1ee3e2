use num_complex::Complex64;

use super::{
    norm_lower_alternating, EstimateMethod, MultiplierError, MultiplierNormEstimate, Result,
    ScalarMask,
};
use crate::frames::FramePair;
use crate::linalg::{hermitian_eigen, ComplexMatrix, HermitianMatrix};

/// Largest `n` accepted by the exhaustive phase grid.
pub const MAX_GRID_TERMS: usize = 6;
pub const MIN_PHASE_STEPS: usize = 8;

/// `1 / cos(π / steps)`: the grid maximum times this factor bounds `‖Φ‖`
/// from above, since rounding every optimal phase to the grid loses at most
/// a factor `cos(π / steps)` in `Re Σ ε_k c_k`.
pub fn grid_upper_factor(phase_steps: usize) -> f64 {
    1.0 / (std::f64::consts::PI / phase_steps as f64).cos()
}

/// Maximum of `‖Φ(ε)‖` over all masks whose phases are multiples of
/// `2π / phase_steps`.
///
/// The global phase is fixed (`ε_1 = 1`) since `‖Φ(e^{iθ}ε)‖ = ‖Φ(ε)‖` and
/// the grid is closed under rotation by grid angles. Subtrees are pruned by
/// `‖partial‖ + Σ_{remaining} ‖x_k‖‖y_k‖`, which never discards a grid
/// point that could beat the incumbent, so the result is the exact grid max.
pub fn norm_oracle_grid(pair: &FramePair, phase_steps: usize) -> Result<MultiplierNormEstimate> {
    let n = pair.len();
    if n > MAX_GRID_TERMS {
        return Err(MultiplierError::TooManyTerms {
            n,
            max: MAX_GRID_TERMS,
        });
    }
    if phase_steps < MIN_PHASE_STEPS {
        return Err(MultiplierError::TooFewPhaseSteps {
            steps: phase_steps,
            min: MIN_PHASE_STEPS,
        });
    }
    let d = pair.dim();
    let terms: Vec<ComplexMatrix> = pair
        .xs()
        .iter()
        .zip(pair.ys())
        .map(|(x, y)| ComplexMatrix::outer(x, y))
        .collect();
    // tail[k] = Σ_{i ≥ k} ‖x_i‖‖y_i‖
    let mut tail = vec![0.0; n + 1];
    for k in (0..n).rev() {
        tail[k] = tail[k + 1] + terms[k].frobenius_norm();
    }
    let roots: Vec<Complex64> = (0..phase_steps)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / phase_steps as f64))
        .collect();

    // Incumbent: grid rounding of a quick alternating estimate.
    let seed_estimate = norm_lower_alternating(pair, 2, 200, 1e-12)?;
    let seed_indices = gauge_fixed_indices(&seed_estimate.witness_mask, phase_steps);
    let mut seed_matrix = vec![Complex64::new(0.0, 0.0); d * d];
    for (t, &j) in terms.iter().zip(&seed_indices) {
        for (out, z) in seed_matrix.iter_mut().zip(t.data()) {
            *out += roots[j] * z;
        }
    }

    let mut search = GridSearch {
        terms: terms.iter().map(|t| t.data().to_vec()).collect(),
        tail,
        d,
        indices: vec![0; n],
        partial: vec![vec![Complex64::new(0.0, 0.0); d * d]; n + 1],
        best_value: fast_op_norm_square(&seed_matrix, d),
        best_indices: seed_indices,
        roots,
    };
    search.partial[1].copy_from_slice(&search.terms[0]);
    search.descend(1);

    let mask = ScalarMask::new(
        search
            .best_indices
            .iter()
            .map(|&j| search.roots[j])
            .collect(),
    )?;
    MultiplierNormEstimate::from_mask(pair, mask, EstimateMethod::Grid)
}

struct GridSearch {
    terms: Vec<Vec<Complex64>>,
    roots: Vec<Complex64>,
    tail: Vec<f64>,
    d: usize,
    indices: Vec<usize>,
    // partial[k] = Σ_{i<k} ε_i x_i y_i*, flattened row-major
    partial: Vec<Vec<Complex64>>,
    best_value: f64,
    best_indices: Vec<usize>,
}

impl GridSearch {
    fn descend(&mut self, depth: usize) {
        let n = self.terms.len();
        if depth == n {
            let value = fast_op_norm_square(&self.partial[n], self.d);
            if value > self.best_value {
                self.best_value = value;
                self.best_indices.clone_from(&self.indices);
            }
            return;
        }
        let here = &self.partial[depth];
        let frobenius = here.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if frobenius + self.tail[depth] <= self.best_value
            || fast_op_norm_square(here, self.d) + self.tail[depth] <= self.best_value
        {
            return;
        }
        for j in 0..self.roots.len() {
            self.indices[depth] = j;
            let root = self.roots[j];
            let (lower, upper) = self.partial.split_at_mut(depth + 1);
            for ((out, base), t) in upper[0]
                .iter_mut()
                .zip(&lower[depth])
                .zip(&self.terms[depth])
            {
                *out = base + root * t;
            }
            self.descend(depth + 1);
        }
    }
}

/// Nearest grid indices with the first phase rotated to zero.
fn gauge_fixed_indices(mask: &ScalarMask, steps: usize) -> Vec<usize> {
    let step = std::f64::consts::TAU / steps as f64;
    let raw: Vec<i64> = mask
        .entries()
        .iter()
        .map(|z| (z.arg() / step).round() as i64)
        .collect();
    let offset = raw.first().copied().unwrap_or(0);
    raw.iter()
        .map(|&j| (j - offset).rem_euclid(steps as i64) as usize)
        .collect()
}

/// Operator norm of a square matrix through `λ_max(M* M)`: closed forms up
/// to 3×3, Jacobi beyond. Accurate to roughly `1e-12` relative, which is
/// ample for ranking grid points; the returned estimate is recomputed by SVD.
#[cfg(test)]
fn fast_op_norm(m: &ComplexMatrix) -> f64 {
    assert!(m.is_square());
    fast_op_norm_square(m.data(), m.rows())
}

fn fast_op_norm_square(m: &[Complex64], d: usize) -> f64 {
    let mut g = [[Complex64::new(0.0, 0.0); 3]; 3];
    if d <= 3 {
        for i in 0..d {
            for j in i..d {
                let mut s = Complex64::new(0.0, 0.0);
                for r in 0..d {
                    s += m[r * d + i].conj() * m[r * d + j];
                }
                g[i][j] = s;
                g[j][i] = s.conj();
            }
        }
    }
    let lambda = match d {
        1 => g[0][0].re,
        2 => {
            let (a, b) = (g[0][0].re, g[1][1].re);
            let half = 0.5 * (a - b);
            0.5 * (a + b) + (half * half + g[0][1].norm_sqr()).sqrt()
        }
        3 => lambda_max_3x3(&g),
        _ => {
            let m = ComplexMatrix::new(d, d, m.to_vec()).expect("finite entries");
            let gram = HermitianMatrix::hermitian_part(&(&m.adjoint() * &m));
            hermitian_eigen(&gram)
                .map(|e| *e.values.last().expect("nonempty"))
                .unwrap_or(f64::NAN)
        }
    };
    lambda.max(0.0).sqrt()
}

/// Largest eigenvalue of a 3×3 Hermitian matrix: trigonometric solution of
/// the characteristic cubic followed by Newton polishing.
fn lambda_max_3x3(a: &[[Complex64; 3]; 3]) -> f64 {
    let (a11, a22, a33) = (a[0][0].re, a[1][1].re, a[2][2].re);
    let (a12, a13, a23) = (a[0][1], a[0][2], a[1][2]);
    let p1 = a12.norm_sqr() + a13.norm_sqr() + a23.norm_sqr();
    if p1 == 0.0 {
        return a11.max(a22).max(a33);
    }
    let tr = a11 + a22 + a33;
    let q = tr / 3.0;
    let (b11, b22, b33) = (a11 - q, a22 - q, a33 - q);
    let p2 = b11 * b11 + b22 * b22 + b33 * b33 + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let cross = (a12 * a23 * a13.conj()).re;
    let det_b = b11 * b22 * b33 + 2.0 * cross
        - b11 * a23.norm_sqr()
        - b22 * a13.norm_sqr()
        - b33 * a12.norm_sqr();
    let r = (det_b / (2.0 * p * p * p)).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let mut lambda = q + 2.0 * p * phi.cos();

    // χ(λ) = λ³ − tr λ² + c1 λ − det
    let c1 = a11 * a22 + a11 * a33 + a22 * a33 - p1;
    let det = a11 * a22 * a33 + 2.0 * cross
        - a11 * a23.norm_sqr()
        - a22 * a13.norm_sqr()
        - a33 * a12.norm_sqr();
    for _ in 0..2 {
        let chi = ((lambda - tr) * lambda + c1) * lambda - det;
        let dchi = (3.0 * lambda - 2.0 * tr) * lambda + c1;
        if dchi.abs() <= f64::EPSILON * p * p {
            break;
        }
        let step = chi / dchi;
        if step.abs() > 1e-6 * (lambda.abs() + p) {
            break;
        }
        lambda -= step;
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_basis;
    use crate::multiplier::mask_matrix;
    use crate::random;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fast_norm_matches_svd() {
        let mut rng = random::seeded(5);
        for d in 1..=5 {
            for _ in 0..20 {
                let m = random::gaussian_matrix(&mut rng, d, d);
                let exact = m.op_norm();
                assert!((fast_op_norm(&m) - exact).abs() <= 1e-12 * exact, "d = {d}");
            }
        }
        // repeated eigenvalues of the Gram matrix
        let u = random::haar_unitary(&mut rng, 3);
        assert!((fast_op_norm(&u) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_pair_has_unit_norm() {
        let b: Vec<_> = (0..3).map(|k| unit_basis(3, k)).collect();
        let pair = FramePair::new(b.clone(), b).unwrap();
        for steps in [8, 12, 48] {
            let est = norm_oracle_grid(&pair, steps).unwrap();
            assert!((est.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scalar_pairs_match_closed_form() {
        // d = 1: ‖Φ‖ = Σ |x_k||y_k|, grid error at most a factor cos(π/steps)
        let mut rng = random::seeded(9);
        for _ in 0..10 {
            let xs: Vec<_> = (0..4)
                .map(|_| random::gaussian_vector(&mut rng, 1))
                .collect();
            let ys: Vec<_> = (0..4)
                .map(|_| random::gaussian_vector(&mut rng, 1))
                .collect();
            let exact: f64 = xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| x[0].norm() * y[0].norm())
                .sum();
            let pair = FramePair::new(xs, ys).unwrap();
            let steps = 64;
            let est = norm_oracle_grid(&pair, steps).unwrap();
            assert!(est.value <= exact * (1.0 + 1e-12));
            assert!(est.value >= exact / grid_upper_factor(steps) - 1e-12);
        }
    }

    #[test]
    fn size_limits() {
        let v = vec![vec![c(1.0, 0.0)]; 7];
        let big = FramePair::new(v.clone(), v).unwrap();
        assert!(matches!(
            norm_oracle_grid(&big, 16),
            Err(MultiplierError::TooManyTerms { n: 7, .. })
        ));
        let v = vec![vec![c(1.0, 0.0)]; 2];
        let small = FramePair::new(v.clone(), v).unwrap();
        assert!(matches!(
            norm_oracle_grid(&small, 4),
            Err(MultiplierError::TooFewPhaseSteps { .. })
        ));
    }

    #[test]
    fn pruned_search_equals_brute_force() {
        let mut rng = random::seeded(21);
        let xs: Vec<_> = (0..3)
            .map(|_| random::gaussian_vector(&mut rng, 2))
            .collect();
        let ys: Vec<_> = (0..3)
            .map(|_| random::gaussian_vector(&mut rng, 2))
            .collect();
        let pair = FramePair::new(xs, ys).unwrap();
        let steps = 12;
        let root =
            |j: usize| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / steps as f64);
        let mut brute: f64 = 0.0;
        for j1 in 0..steps {
            for j2 in 0..steps {
                for j3 in 0..steps {
                    let mask = ScalarMask::new(vec![root(j1), root(j2), root(j3)]).unwrap();
                    brute = brute.max(mask_matrix(&pair, &mask).unwrap().op_norm());
                }
            }
        }
        let est = norm_oracle_grid(&pair, steps).unwrap();
        assert!((est.value - brute).abs() < 1e-12 * brute);
    }
}
