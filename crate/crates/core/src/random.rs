//! Seeded random generators for vectors, unitaries and test instances.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{inner, norm, ComplexMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for sub-task `index` of a seeded job.
pub fn substream(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

/// Standard complex Gaussian entries `(N(0,1) + i N(0,1)) / √2`.
pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        })
        .collect()
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = gaussian_vector(rng, rows * cols);
    ComplexMatrix::new(rows, cols, data).expect("finite Gaussian samples")
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v = gaussian_vector(rng, dim);
        let n = norm(&v);
        if n > 1e-8 {
            return v.iter().map(|z| z / n).collect();
        }
    }
}

pub fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn phases<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| unit_phase(rng)).collect()
}

/// Haar-distributed unitary: Gram–Schmidt on the columns of a complex
/// Gaussian matrix (positive diagonal of R makes the law exactly Haar).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while columns.len() < dim {
        let mut v = gaussian_vector(rng, dim);
        for q in &columns {
            let c = inner(&v, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= c * qi;
            }
        }
        // second pass for orthogonality to working precision
        for q in &columns {
            let c = inner(&v, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= c * qi;
            }
        }
        let n = norm(&v);
        if n > 1e-8 {
            columns.push(v.iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_columns(&columns)
}

/// Log-uniform sample from `[lo, hi]`, `0 < lo ≤ hi`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    rng.random_range(lo.ln()..=hi.ln()).exp()
}
