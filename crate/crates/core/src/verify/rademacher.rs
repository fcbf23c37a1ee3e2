//! Exact Rademacher averages by sign enumeration.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Result, VerifyError};

/// Largest `m` accepted by [`RademacherEnsemble`].
pub const MAX_RADEMACHER: usize = 24;

/// Largest coefficient count for [`khintchine_check`].
pub const MAX_KHINTCHINE: usize = 14;

/// `1/√2`, the optimal lower constant in Khintchine's inequality for `L¹`
/// with Rademacher signs.
pub const KHINTCHINE_GAMMA: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// The first `m` Rademacher functions `r_n(t) = sign sin(2ⁿπt)`.
///
/// On the dyadic interval `(i/2^m, (i+1)/2^m)` every `r_n` is constant, so
/// integrals over `t ∈ [0, 1]` are averages over the `2^m` intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RademacherEnsemble {
    m: usize,
}

impl RademacherEnsemble {
    pub fn new(m: usize) -> Result<Self> {
        if m > MAX_RADEMACHER {
            return Err(VerifyError::TooLarge {
                what: "Rademacher ensemble",
                size: m,
                max: MAX_RADEMACHER,
            });
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn patterns(&self) -> usize {
        1 << self.m
    }

    /// Value of `r_{j+1}` on dyadic interval `i`.
    pub fn sign(&self, i: usize, j: usize) -> f64 {
        if (i >> (self.m - 1 - j)) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `(r_1, …, r_m)` on dyadic interval `i`.
    pub fn signs(&self, i: usize) -> Vec<f64> {
        (0..self.m).map(|j| self.sign(i, j)).collect()
    }

    /// `∫₀¹ f(r_1(t), …, r_m(t)) dt` by enumeration.
    pub fn average(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let mut signs = vec![0.0; self.m];
        let mut total = 0.0;
        for i in 0..self.patterns() {
            for (j, s) in signs.iter_mut().enumerate() {
                *s = self.sign(i, j);
            }
            total += f(&signs);
        }
        total / self.patterns() as f64
    }

    /// The same integral evaluating `sign sin(2ⁿπt)` at each interval
    /// midpoint.
    pub fn dyadic_integral(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let pieces = self.patterns();
        let mut total = 0.0;
        for i in 0..pieces {
            let t = (i as f64 + 0.5) / pieces as f64;
            let signs: Vec<f64> = (1..=self.m)
                .map(|n| {
                    (2f64.powi(n as i32) * std::f64::consts::PI * t)
                        .sin()
                        .signum()
                })
                .collect();
            total += f(&signs);
        }
        total / pieces as f64
    }

    /// `E |Σ_j r_j c_j|`.
    pub fn mean_abs(&self, c: &[Complex64]) -> f64 {
        assert_eq!(c.len(), self.m, "one coefficient per sign");
        self.average(|s| {
            c.iter()
                .zip(s)
                .map(|(z, sj)| z * sj)
                .sum::<Complex64>()
                .norm()
        })
    }

    /// `E ‖Σ_j r_j w_j‖` and `E ‖Σ_j r_j w_j‖²` for vectors `w_j`.
    pub fn mean_norms(&self, ws: &[Vec<Complex64>]) -> (f64, f64) {
        assert_eq!(ws.len(), self.m, "one vector per sign");
        let dim = ws.first().map_or(0, Vec::len);
        let mut first = 0.0;
        let mut second = 0.0;
        let mut acc = vec![Complex64::new(0.0, 0.0); dim];
        for i in 0..self.patterns() {
            acc.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for (j, w) in ws.iter().enumerate() {
                let s = self.sign(i, j);
                for (a, b) in acc.iter_mut().zip(w) {
                    *a += b * s;
                }
            }
            let sq: f64 = acc.iter().map(|z| z.norm_sqr()).sum();
            first += sq.sqrt();
            second += sq;
        }
        let p = self.patterns() as f64;
        (first / p, second / p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KhintchineReport {
    /// `E |Σ a_k r_k|`.
    pub lhs: f64,
    /// `γ (Σ |a_k|²)^{1/2}`.
    pub rhs: f64,
    pub ratio: f64,
    pub passed: bool,
}

/// Absolute slack for [`khintchine_check`].
pub const KHINTCHINE_TOL: f64 = 1e-12;

pub fn khintchine_check(a: &[Complex64]) -> Result<KhintchineReport> {
    if a.len() > MAX_KHINTCHINE {
        return Err(VerifyError::TooLarge {
            what: "Khintchine coefficient vector",
            size: a.len(),
            max: MAX_KHINTCHINE,
        });
    }
    let lhs = RademacherEnsemble::new(a.len())?.mean_abs(a);
    let rhs = KHINTCHINE_GAMMA * a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let ratio = if rhs > 0.0 { lhs / rhs } else { 1.0 };
    Ok(KhintchineReport {
        lhs,
        rhs,
        ratio,
        passed: lhs >= rhs - KHINTCHINE_TOL * rhs.max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn equality_case() {
        let r = khintchine_check(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15);
        assert!((r.rhs - 1.0).abs() < 1e-15);
        assert!(r.passed);
    }

    #[test]
    fn single_coefficient() {
        let r = khintchine_check(&[c(1.0, 0.0)]).unwrap();
        assert_eq!(r.lhs, 1.0);
        assert!((r.rhs - KHINTCHINE_GAMMA).abs() < 1e-16);
    }

    #[test]
    fn three_ones() {
        // |±1±1±1| is 3 on 2 of 8 patterns and 1 on the other 6
        let r = khintchine_check(&[c(1.0, 0.0); 3]).unwrap();
        assert!((r.lhs - 1.5).abs() < 1e-15);
    }

    #[test]
    fn enumeration_matches_dyadic_integration() {
        for m in 1..=4 {
            let ens = RademacherEnsemble::new(m).unwrap();
            let weights: Vec<f64> = (0..m).map(|j| 0.7 + j as f64).collect();
            let f = |s: &[f64]| {
                let lin: f64 = s.iter().zip(&weights).map(|(a, b)| a * b).sum();
                lin.abs().powf(1.3) + s[0] * s[m - 1]
            };
            assert_eq!(ens.average(f), ens.dyadic_integral(f));
        }
    }

    #[test]
    fn patterns_are_distinct() {
        let ens = RademacherEnsemble::new(5).unwrap();
        let mut seen: Vec<Vec<i8>> = (0..ens.patterns())
            .map(|i| ens.signs(i).iter().map(|&s| s as i8).collect())
            .collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 32);
    }

    #[test]
    fn second_moment_is_sum_of_squares() {
        let ws = vec![
            vec![c(1.0, 2.0), c(0.0, -1.0)],
            vec![c(0.5, 0.0), c(3.0, 1.0)],
        ];
        let (_, second) = RademacherEnsemble::new(2).unwrap().mean_norms(&ws);
        let direct: f64 = ws.iter().flatten().map(|z| z.norm_sqr()).sum();
        assert!((second - direct).abs() < 1e-13);
    }

    #[test]
    fn too_many_coefficients() {
        assert!(matches!(
            khintchine_check(&vec![c(1.0, 0.0); 15]),
            Err(VerifyError::TooLarge { .. })
        ));
    }
}
