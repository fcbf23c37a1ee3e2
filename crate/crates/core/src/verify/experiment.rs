//! Multi-step experiments: ratio of the certified cb bound to `‖Φ‖`,
//! end-to-end rescaling of Schauder pairs and dilation checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Result, VerifyError, CB_CONSTANT, IDENTITY_TOL, RATIO_SLACK};
use crate::frames::{self, FramePair, FRAME_TOL};
use crate::generate::{self, InstanceKind};
use crate::multiplier::{self, mask_matrix, AlternatingConfig, ScalarMask};
use crate::random;
use crate::rescale::{
    self, build_dilation, dilation_reconstruct, rank_one_residual, FrameBoundsRecord, LogWeights,
    OptimizeConfig,
};

/// Best available value of `‖Φ‖` on grid-sized instances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiNormOracle {
    /// Exact maximum over the phase grid.
    pub grid: f64,
    /// Alternating ascent estimate.
    pub alternating: f64,
    /// `max(grid, alternating)`, a certified lower bound.
    pub value: f64,
    /// `grid / cos(π / steps)`, a certified upper bound.
    pub upper: f64,
}

pub fn phi_norm_oracle(pair: &FramePair, phase_steps: usize) -> Result<PhiNormOracle> {
    let grid = multiplier::norm_oracle_grid(pair, phase_steps)?.value;
    let alternating =
        multiplier::norm_lower_alternating_with(pair, &AlternatingConfig::default())?.value;
    Ok(PhiNormOracle {
        grid,
        alternating,
        value: grid.max(alternating),
        upper: grid * multiplier::grid_upper_factor(phase_steps),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioConfig {
    pub instances: usize,
    /// `n` is drawn uniformly from `1..=n_max`.
    pub n_max: usize,
    /// `d` is drawn uniformly from `1..=d_max`.
    pub d_max: usize,
    /// Mangling range for `|β_k|`; `None` leaves instances unmangled.
    pub scaling_range: Option<(f64, f64)>,
    pub phase_steps: usize,
    pub seed: u64,
    pub optimize: OptimizeConfig,
}

impl Default for RatioConfig {
    fn default() -> Self {
        Self {
            instances: 200,
            n_max: 5,
            d_max: 3,
            scaling_range: Some(generate::DEFAULT_MANGLE_RANGE),
            phase_steps: 48,
            seed: 0,
            optimize: OptimizeConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioRecord {
    pub index: usize,
    pub n: usize,
    pub d: usize,
    pub phi_norm_lower: f64,
    pub phi_norm_oracle: f64,
    pub phi_norm_upper: f64,
    pub m_upper: f64,
    pub m_lower: f64,
    pub weights: LogWeights,
    /// `m_upper / phi_norm_oracle`.
    pub ratio: f64,
    pub bracket_ok: bool,
    #[serde(skip)]
    pub pair: Option<FramePair>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioReport {
    pub records: Vec<RatioRecord>,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// Ratio quantiles at 0, 10, 25, 50, 75, 90 and 100 percent.
    pub quantiles: Vec<(f64, f64)>,
    pub bound: f64,
    /// Indices whose ratio exceeds `bound` or whose bracket is inverted.
    pub failures: Vec<usize>,
}

/// Generates one instance of the experiment; `n` and `d` are part of the
/// per-index stream so every instance can be replayed alone.
pub fn ratio_instance(cfg: &RatioConfig, index: usize) -> Result<FramePair> {
    use rand::Rng;
    let mut rng = random::substream(cfg.seed, index as u64);
    let n = rng.random_range(1..=cfg.n_max.max(1));
    let d = rng.random_range(1..=cfg.d_max.max(1));
    Ok(generate::generate_with(
        &mut rng,
        InstanceKind::Gaussian,
        n,
        d,
        cfg.scaling_range,
    )?)
}

/// Ratio of the certified cb upper bound to the `‖Φ‖` oracle across a
/// seeded corpus. Instances run in parallel and are reported in index order.
pub fn ratio_experiment(cfg: &RatioConfig) -> Result<RatioReport> {
    if cfg.n_max > multiplier::MAX_GRID_TERMS {
        return Err(VerifyError::TooLarge {
            what: "ratio experiment n",
            size: cfg.n_max,
            max: multiplier::MAX_GRID_TERMS,
        });
    }
    let records = (0..cfg.instances)
        .into_par_iter()
        .map(|index| {
            let pair = ratio_instance(cfg, index)?;
            ratio_record(&pair, index, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(records))
}

pub fn ratio_record(pair: &FramePair, index: usize, cfg: &RatioConfig) -> Result<RatioRecord> {
    let oracle = phi_norm_oracle(pair, cfg.phase_steps)?;
    let mut opt = cfg.optimize;
    opt.lower.seed = cfg.seed.wrapping_add(index as u64);
    let bracket = rescale::optimize(pair, &opt)?;
    Ok(RatioRecord {
        index,
        n: pair.len(),
        d: pair.dim(),
        phi_norm_lower: oracle.alternating,
        phi_norm_oracle: oracle.value,
        phi_norm_upper: oracle.upper,
        m_upper: bracket.m_upper,
        m_lower: bracket.m_lower,
        ratio: bracket.m_upper / oracle.value,
        bracket_ok: bracket.m_lower <= bracket.m_upper + 1e-8,
        weights: bracket.weights,
        pair: Some(pair.clone()),
    })
}

fn summarize(records: Vec<RatioRecord>) -> RatioReport {
    let bound = CB_CONSTANT * (1.0 + RATIO_SLACK);
    let mut ratios: Vec<f64> = records.iter().map(|r| r.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let quantiles = if ratios.is_empty() {
        Vec::new()
    } else {
        [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0]
            .iter()
            .map(|&q| {
                let i = (q * (ratios.len() - 1) as f64).round() as usize;
                (q, ratios[i])
            })
            .collect()
    };
    let failures = records
        .iter()
        .filter(|r| !(r.ratio <= bound) || !r.bracket_ok)
        .map(|r| r.index)
        .collect();
    RatioReport {
        max_ratio: ratios.last().copied().unwrap_or(0.0),
        mean_ratio: ratios.iter().sum::<f64>() / ratios.len().max(1) as f64,
        quantiles,
        bound,
        failures,
        records,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndToEndReport {
    pub schauder_deviation: f64,
    pub m_upper: f64,
    pub m_lower: f64,
    pub alpha: Vec<f64>,
    pub x_bounds: FrameBoundsRecord,
    pub y_bounds: FrameBoundsRecord,
    /// `‖Σ α_k x_k (α_k⁻¹ y_k)* − I‖`.
    pub scaled_deviation: f64,
    pub passed: bool,
}

/// Rescales a Schauder pair and checks that both rescaled families are
/// frames bounded by the certified value.
pub fn end_to_end_rescale_check(
    pair: &FramePair,
    tol: f64,
    cfg: &OptimizeConfig,
) -> Result<EndToEndReport> {
    let schauder_deviation = frames::schauder_deviation(pair);
    if !(schauder_deviation <= tol) {
        return Err(VerifyError::NotSchauder {
            deviation: schauder_deviation,
            tol,
        });
    }
    let bracket = rescale::optimize(pair, cfg)?;
    let scaling = rescale::extract_scaling(pair, &bracket.weights)?;
    let scaled = rescale::scaled_pair(pair, &bracket.weights)?;
    let scaled_deviation = frames::schauder_deviation(&scaled);
    let upper = bracket.m_upper + 1e-8;
    let passed = scaling.x_bounds.lower > FRAME_TOL
        && scaling.y_bounds.lower > FRAME_TOL
        && scaling.x_bounds.upper <= upper
        && scaling.y_bounds.upper <= upper
        && scaled_deviation <= tol.max(IDENTITY_TOL) * 10.0;
    Ok(EndToEndReport {
        schauder_deviation,
        m_upper: bracket.m_upper,
        m_lower: bracket.m_lower,
        alpha: scaling.alpha,
        x_bounds: scaling.x_bounds,
        y_bounds: scaling.y_bounds,
        scaled_deviation,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilationReport {
    pub m_upper: f64,
    pub v1_defect: f64,
    pub v2_defect: f64,
    /// Worst `|M V₁*π(e_k)V₂ − x_k y_k*|` entry.
    pub rank_one_residual: f64,
    /// Worst `|M V₁*π(a)V₂ − Φ(a)|` entry over the tested masks, all-ones
    /// included.
    pub mask_residual: f64,
    pub passed: bool,
}

/// Optimizes weights, builds the dilation and compares it with `Φ` on the
/// all-ones mask and `masks` random unimodular masks.
pub fn dilation_check(
    pair: &FramePair,
    cfg: &OptimizeConfig,
    masks: usize,
    seed: u64,
) -> Result<DilationReport> {
    let bracket = rescale::optimize(pair, cfg)?;
    let dil = build_dilation(pair, &bracket.weights, bracket.m_upper)?;
    let (v1_defect, v2_defect) = dil.isometry_defects();
    let rank_one = rank_one_residual(pair, &dil)?;
    let scale = bracket.m_upper.max(1.0);
    let mut rng = random::seeded(seed);
    let mut mask_residual: f64 = 0.0;
    for s in 0..=masks {
        let mask = if s == 0 {
            ScalarMask::ones(pair.len())
        } else {
            ScalarMask::new(random::phases(&mut rng, pair.len()))?
        };
        let diff = &dilation_reconstruct(&dil, &mask)? - &mask_matrix(pair, &mask)?;
        mask_residual = mask_residual.max(diff.max_abs());
    }
    let passed = v1_defect <= IDENTITY_TOL
        && v2_defect <= IDENTITY_TOL
        && rank_one <= IDENTITY_TOL * scale
        && mask_residual <= IDENTITY_TOL * scale;
    Ok(DilationReport {
        m_upper: bracket.m_upper,
        v1_defect,
        v2_defect,
        rank_one_residual: rank_one,
        mask_residual,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_basis;

    fn onb_pair(d: usize) -> FramePair {
        let b: Vec<_> = (0..d).map(|k| unit_basis(d, k)).collect();
        FramePair::new(b.clone(), b).unwrap()
    }

    #[test]
    fn orthonormal_ratio_is_one() {
        let cfg = RatioConfig::default();
        let r = ratio_record(&onb_pair(3), 0, &cfg).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scalar_ratio_is_one() {
        let cfg = RatioConfig {
            instances: 6,
            d_max: 1,
            ..RatioConfig::default()
        };
        let report = ratio_experiment(&cfg).unwrap();
        for r in &report.records {
            assert!((r.ratio - 1.0).abs() < 1e-9, "{}", r.ratio);
        }
    }

    #[test]
    fn small_corpus_within_bound() {
        let cfg = RatioConfig {
            instances: 8,
            n_max: 4,
            d_max: 2,
            ..RatioConfig::default()
        };
        let report = ratio_experiment(&cfg).unwrap();
        assert!(report.failures.is_empty());
        assert_eq!(report.records.len(), 8);
        assert!(report.records.iter().enumerate().all(|(i, r)| r.index == i));
    }

    #[test]
    fn orthonormal_end_to_end() {
        let r = end_to_end_rescale_check(&onb_pair(2), 1e-10, &OptimizeConfig::default()).unwrap();
        assert!(r.passed);
        assert!((r.x_bounds.lower - 1.0).abs() < 1e-9 && (r.y_bounds.upper - 1.0).abs() < 1e-9);
    }

    #[test]
    fn non_schauder_rejected() {
        let pair = FramePair::new(vec![unit_basis(2, 0)], vec![unit_basis(2, 0)]).unwrap();
        assert!(matches!(
            end_to_end_rescale_check(&pair, 1e-10, &OptimizeConfig::default()),
            Err(VerifyError::NotSchauder { .. })
        ));
    }

    #[test]
    fn dilation_on_orthonormal() {
        let r = dilation_check(&onb_pair(3), &OptimizeConfig::default(), 5, 1).unwrap();
        assert!(r.passed);
        assert!(r.mask_residual < 1e-14);
    }
}
