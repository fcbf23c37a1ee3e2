//! Seeded verification suites: batches of checks with failure records.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    holder_trace_check, key_simple_check, super_key_check, trace_lemma_check, trace_pairing_check,
};
use super::experiment::{
    dilation_check, phi_norm_oracle, ratio_experiment, RatioConfig, RatioReport,
};
use super::rademacher::{khintchine_check, RademacherEnsemble, KHINTCHINE_TOL};
use super::{Result, IDENTITY_TOL};
use crate::frames::FramePair;
use crate::generate::{self, InstanceKind};
use crate::multiplier::{self, AlternatingConfig, AmplifiedInput};
use crate::random::{self, SeededRng};
use crate::rescale::OptimizeConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Khintchine,
    Trace,
    Chain,
    Ratio,
    Dilation,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Khintchine,
        Suite::Trace,
        Suite::Chain,
        Suite::Ratio,
        Suite::Dilation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Khintchine => "khintchine",
            Suite::Trace => "trace",
            Suite::Chain => "chain",
            Suite::Ratio => "ratio",
            Suite::Dilation => "dilation",
        }
    }

    /// Stream offset so suites sharing a seed draw independent data.
    fn stream(self) -> u64 {
        (self as u64 + 1) << 32
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Ratio-suite instance count.
    pub instances: usize,
    pub n_max: usize,
    pub d_max: usize,
    pub scaling_range: Option<(f64, f64)>,
    pub phase_steps: usize,
    pub khintchine_m_max: usize,
    pub khintchine_vectors: usize,
    pub trace_m_max: usize,
    pub trace_draws: usize,
    pub chain_instances: usize,
    pub chain_draws: usize,
    pub chain_m_max: usize,
    pub dilation_instances: usize,
    pub dilation_masks: usize,
    pub optimize: OptimizeConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            instances: 200,
            n_max: 5,
            d_max: 3,
            scaling_range: Some(generate::DEFAULT_MANGLE_RANGE),
            phase_steps: 48,
            khintchine_m_max: 12,
            khintchine_vectors: 1000,
            trace_m_max: 8,
            trace_draws: 1000,
            chain_instances: 20,
            chain_draws: 100,
            chain_m_max: 10,
            dilation_instances: 100,
            dilation_masks: 20,
            optimize: OptimizeConfig::default(),
        }
    }
}

/// A failed case. The offending pair, when there is one, is kept for replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Failure {
    pub case: usize,
    pub message: String,
    #[serde(skip)]
    pub pair: Option<FramePair>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub metrics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<RatioReport>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            cases: 0,
            failures: Vec::new(),
            metrics: BTreeMap::new(),
            ratio: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, message: impl FnOnce() -> String, pair: Option<&FramePair>) {
        if !ok {
            self.failures.push(Failure {
                case: self.cases,
                message: message(),
                pair: pair.cloned(),
            });
        }
        self.cases += 1;
    }

    fn max_metric(&mut self, key: &str, value: f64) {
        let e = self
            .metrics
            .entry(key.to_string())
            .or_insert(f64::NEG_INFINITY);
        *e = e.max(value);
    }

    fn min_metric(&mut self, key: &str, value: f64) {
        let e = self.metrics.entry(key.to_string()).or_insert(f64::INFINITY);
        *e = e.min(value);
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    match suite {
        Suite::Khintchine => khintchine_suite(cfg),
        Suite::Trace => trace_suite(cfg),
        Suite::Chain => chain_suite(cfg),
        Suite::Ratio => ratio_suite(cfg),
        Suite::Dilation => dilation_suite(cfg),
    }
}

fn rng_for(suite: Suite, cfg: &SuiteConfig, index: usize) -> SeededRng {
    random::substream(cfg.seed, suite.stream() + index as u64)
}

fn random_pair(rng: &mut SeededRng, cfg: &SuiteConfig) -> Result<FramePair> {
    let n = rng.random_range(1..=cfg.n_max.max(1));
    let d = rng.random_range(1..=cfg.d_max.max(1));
    Ok(generate::generate_with(
        rng,
        InstanceKind::Gaussian,
        n,
        d,
        cfg.scaling_range,
    )?)
}

fn khintchine_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Khintchine);
    let one = Complex64::new(1.0, 0.0);
    let eq = khintchine_check(&[one, one])?;
    report.record(
        (eq.ratio - 1.0).abs() <= KHINTCHINE_TOL,
        || format!("equality case a = (1, 1) gave ratio {}", eq.ratio),
        None,
    );
    for m in 1..=4 {
        let ens = RademacherEnsemble::new(m)?;
        let w: Vec<f64> = (0..m).map(|j| 1.0 + 0.37 * j as f64).collect();
        let f = |s: &[f64]| s.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>().abs();
        let (a, b) = (ens.average(f), ens.dyadic_integral(f));
        report.record(
            a == b,
            || format!("m = {m}: enumeration {a} differs from dyadic integral {b}"),
            None,
        );
    }
    let m_max = cfg.khintchine_m_max.max(1);
    let results: Vec<_> = (0..cfg.khintchine_vectors)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(Suite::Khintchine, cfg, i);
            let m = 1 + i % m_max;
            khintchine_check(&random::gaussian_vector(&mut rng, m)).map(|r| (m, r))
        })
        .collect::<Result<_>>()?;
    for (m, r) in results {
        report.min_metric("min_ratio", r.ratio);
        report.record(
            r.ratio >= 1.0 - KHINTCHINE_TOL,
            || format!("m = {m}: lhs {} below rhs {}", r.lhs, r.rhs),
            None,
        );
    }
    Ok(report)
}

fn trace_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Trace);
    let m_max = cfg.trace_m_max.max(1);
    for i in 0..cfg.trace_draws {
        let mut rng = rng_for(Suite::Trace, cfg, i);
        let m = 1 + i % m_max;
        let alpha = random::gaussian_vector(&mut rng, m);
        let beta = random::gaussian_vector(&mut rng, m);
        let r = trace_lemma_check(&alpha, &beta)?;
        report.max_metric("max_trace_lemma_error", r.relative_error);
        report.record(
            r.passed,
            || format!("rank-one trace norm {} vs {}", r.svd_value, r.closed_form),
            None,
        );
    }
    let side = cfg.trace_draws / 10;
    for i in 0..side {
        let mut rng = rng_for(Suite::Trace, cfg, cfg.trace_draws + i);
        let m = 1 + i % m_max;
        let a = random::gaussian_matrix(&mut rng, m, m);
        let b = if i % 2 == 0 {
            random::gaussian_matrix(&mut rng, m, m)
        } else {
            a.adjoint()
        };
        let r = holder_trace_check(&a, &b)?;
        report.min_metric(
            "min_holder_relative_slack",
            r.slack / r.scale.max(f64::MIN_POSITIVE),
        );
        report.record(
            r.passed,
            || format!("|tr(AB)| = {} above ‖A‖‖B‖₁ = {}", r.lhs, r.rhs),
            None,
        );
    }
    for i in 0..side {
        let mut rng = rng_for(Suite::Trace, cfg, cfg.trace_draws + side + i);
        let pair = random_pair(&mut rng, cfg)?;
        let m = 1 + i % 4;
        let blocks = (0..pair.len())
            .map(|_| random::gaussian_matrix(&mut rng, m, m))
            .collect();
        let a = AmplifiedInput::new(m, blocks)?;
        let us: Vec<_> = (0..m)
            .map(|_| random::gaussian_vector(&mut rng, pair.dim()))
            .collect();
        let vs: Vec<_> = (0..m)
            .map(|_| random::gaussian_vector(&mut rng, pair.dim()))
            .collect();
        let r = trace_pairing_check(&pair, &a, &us, &vs)?;
        report.max_metric("max_pairing_residual", r.residual);
        report.max_metric("max_rank_defect", r.largest_rank_defect);
        report.record(
            r.passed && r.largest_rank_defect <= IDENTITY_TOL,
            || {
                format!(
                    "pairing residual {:e}, rank defect {:e}",
                    r.residual, r.largest_rank_defect
                )
            },
            Some(&pair),
        );
    }
    Ok(report)
}

struct ChainOutcome {
    pair: FramePair,
    phi: f64,
    min_simple: f64,
    min_super: f64,
    chains: usize,
    failures: Vec<String>,
}

fn chain_instance(cfg: &SuiteConfig, index: usize) -> Result<ChainOutcome> {
    let mut rng = rng_for(Suite::Chain, cfg, index);
    let pair = random_pair(&mut rng, cfg)?;
    let phi = phi_norm_oracle(&pair, cfg.phase_steps)?.value;
    let witness = multiplier::norm_lower_alternating_with(&pair, &AlternatingConfig::default())?;
    let d = pair.dim();
    let mut out = ChainOutcome {
        phi,
        min_simple: f64::INFINITY,
        min_super: f64::INFINITY,
        chains: 0,
        failures: Vec::new(),
        pair: pair.clone(),
    };
    let w = key_simple_check(&pair, &witness.witness_u, &witness.witness_v, phi)?;
    if !w.passed {
        out.failures
            .push(format!("witness: lhs {} above {}", w.lhs, w.rhs));
    }
    let m_max = cfg.chain_m_max.max(1);
    for draw in 0..cfg.chain_draws {
        let u = random::gaussian_vector(&mut rng, d);
        let v = random::gaussian_vector(&mut rng, d);
        let s = key_simple_check(&pair, &u, &v, phi)?;
        out.min_simple = out.min_simple.min(s.slack / s.scale);
        if !s.passed {
            out.failures
                .push(format!("draw {draw}: simple lhs {} above {}", s.lhs, s.rhs));
        }
        let m = 1 + draw % m_max;
        let us: Vec<_> = (0..m)
            .map(|_| random::gaussian_vector(&mut rng, d))
            .collect();
        let vs: Vec<_> = (0..m)
            .map(|_| random::gaussian_vector(&mut rng, d))
            .collect();
        let r = super_key_check(&pair, &us, &vs, phi)?;
        out.min_super = out.min_super.min(r.check.slack / r.check.scale);
        out.chains += usize::from(r.chain.is_some());
        if !r.passed() {
            out.failures.push(format!(
                "draw {draw}: key estimate failed at m = {m}: {r:?}"
            ));
        }
    }
    Ok(out)
}

fn chain_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Chain);
    let outcomes: Vec<ChainOutcome> = (0..cfg.chain_instances)
        .into_par_iter()
        .map(|i| chain_instance(cfg, i))
        .collect::<Result<_>>()?;
    let mut chains = 0;
    for o in outcomes {
        report.min_metric("min_simple_relative_slack", o.min_simple);
        report.min_metric("min_key_relative_slack", o.min_super);
        report.max_metric("max_phi_norm", o.phi);
        chains += o.chains;
        let failures = o.failures;
        report.record(failures.is_empty(), || failures.join("; "), Some(&o.pair));
    }
    report
        .metrics
        .insert("rademacher_chains".into(), chains as f64);
    Ok(report)
}

fn ratio_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Ratio);
    let rc = RatioConfig {
        instances: cfg.instances,
        n_max: cfg.n_max,
        d_max: cfg.d_max,
        scaling_range: cfg.scaling_range,
        phase_steps: cfg.phase_steps,
        seed: cfg.seed,
        optimize: cfg.optimize,
    };
    let ratio = ratio_experiment(&rc)?;
    for r in &ratio.records {
        report.record(
            r.ratio <= ratio.bound && r.bracket_ok,
            || {
                format!(
                    "instance {}: ratio {} (bound {}), bracket [{}, {}]",
                    r.index, r.ratio, ratio.bound, r.m_lower, r.m_upper
                )
            },
            r.pair.as_ref(),
        );
    }
    report.metrics.insert("max_ratio".into(), ratio.max_ratio);
    report.metrics.insert("mean_ratio".into(), ratio.mean_ratio);
    report.ratio = Some(ratio);
    Ok(report)
}

fn dilation_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Dilation);
    let outcomes: Vec<_> = (0..cfg.dilation_instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(Suite::Dilation, cfg, i);
            let pair = random_pair(&mut rng, cfg)?;
            let seed = rng.random();
            let r = dilation_check(&pair, &cfg.optimize, cfg.dilation_masks, seed)?;
            Ok((pair, r))
        })
        .collect::<Result<_>>()?;
    for (pair, r) in outcomes {
        report.max_metric("max_isometry_defect", r.v1_defect.max(r.v2_defect));
        report.max_metric("max_rank_one_residual", r.rank_one_residual);
        report.max_metric("max_mask_residual", r.mask_residual);
        report.record(r.passed, || format!("{r:?}"), Some(&pair));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            instances: 6,
            n_max: 4,
            d_max: 2,
            khintchine_m_max: 8,
            khintchine_vectors: 50,
            trace_draws: 60,
            chain_instances: 3,
            chain_draws: 12,
            dilation_instances: 5,
            dilation_masks: 4,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn every_suite_passes_on_a_small_config() {
        for suite in Suite::ALL {
            let r = run_suite(suite, &small()).unwrap();
            assert!(r.passed(), "{suite}: {:?}", r.failures);
            assert!(r.cases > 0);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }
}
