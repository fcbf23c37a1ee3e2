use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::args::{AnalyzeArgs, BenchArgs, GenArgs, OptimizerArgs, RescaleArgs, VerifyArgs};
use super::io::{
    expand_inputs, read_pair, write_text, InstanceFile, Metadata, ReportFile, ReportRecord,
};
use crate::frames::{self, FramePair, FRAME_TOL};
use crate::generate::{self, GenerateConfig, InstanceKind};
use crate::multiplier::{self, AlternatingConfig, MAX_GRID_TERMS};
use crate::random;
use crate::rescale::{self, LowerBoundConfig, OptimizeConfig, StepSchedule};
use crate::verify::{self, SuiteConfig};

/// Exit status for a run whose checks failed.
pub const EXIT_FAILED: i32 = 1;

/// Slack for certificate checks on optimizer output.
const CERT_TOL: f64 = 1e-8;

/// Schauder deviation below which `rescale` also checks the frame property.
const SCHAUDER_CHECK_TOL: f64 = 1e-8;

fn status(ok: bool) -> i32 {
    if ok {
        0
    } else {
        EXIT_FAILED
    }
}

pub fn gen(args: &GenArgs, seed: u64) -> anyhow::Result<i32> {
    let kind = InstanceKind::from(args.kind);
    let scaling_range = args.scale_min.zip(args.scale_max);
    let pair = generate::generate(&GenerateConfig {
        kind,
        n: args.n,
        d: args.d,
        scaling_range,
        seed,
    })?;
    let mut generator = format!("framescale gen --kind {kind} --n {} --d {}", args.n, args.d);
    if let Some((lo, hi)) = scaling_range {
        generator.push_str(&format!(" --scale-min {lo} --scale-max {hi}"));
    }
    let file = InstanceFile::from_pair(
        &pair,
        Some(Metadata {
            seed: Some(seed),
            generator: Some(generator),
            description: None,
        }),
    );
    match &args.out {
        Some(p) => file.write(p)?,
        None => print!("{}", file.to_json()),
    }
    Ok(0)
}

fn label(path: &Path) -> String {
    path.display().to_string()
}

fn base_record(path: &Path, pair: &FramePair) -> anyhow::Result<ReportRecord> {
    let bx = frames::bessel_and_frame_bounds(pair.xs())?;
    let by = frames::bessel_and_frame_bounds(pair.ys())?;
    Ok(ReportRecord {
        instance: label(path),
        n: pair.len(),
        d: pair.dim(),
        frame_bounds_x: Some((bx.lower, bx.upper)),
        frame_bounds_y: Some((by.lower, by.upper)),
        schauder_deviation: Some(frames::schauder_deviation(pair)),
        ..Default::default()
    })
}

fn analyze_one(path: &Path, phase_steps: usize, seed: u64) -> anyhow::Result<ReportRecord> {
    let (_, pair) = read_pair(path)?;
    let mut rec = base_record(path, &pair)?;
    let alt = multiplier::norm_lower_alternating_with(
        &pair,
        &AlternatingConfig {
            seed,
            ..AlternatingConfig::default()
        },
    )?;
    rec.phi_norm_lower = Some(alt.value);
    if pair.len() <= MAX_GRID_TERMS {
        let oracle = verify::phi_norm_oracle(&pair, phase_steps)?;
        rec.phi_norm_oracle = Some(oracle.value);
        rec.phi_norm_upper = Some(oracle.upper);
        rec.check_results.insert(
            "phi_norm_bracket".into(),
            alt.value <= oracle.upper * (1.0 + verify::INEQUALITY_TOL),
        );
    }
    Ok(rec)
}

pub fn analyze(args: &AnalyzeArgs, seed: u64) -> anyhow::Result<i32> {
    let paths = expand_inputs(&args.inputs)?;
    let records = paths
        .par_iter()
        .map(|p| analyze_one(p, args.phase_steps, seed))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let report = ReportFile::new("analyze", seed, records);
    report.emit(args.out.as_deref())?;
    Ok(status(report.summary.failures == 0))
}

fn optimize_config(args: &OptimizerArgs, seed: u64) -> anyhow::Result<OptimizeConfig> {
    if !(args.tol >= 0.0 && args.step > 0.0 && args.step.is_finite()) {
        bail!("--tol must be nonnegative and --step positive");
    }
    Ok(OptimizeConfig {
        max_iters: args.max_iters,
        schedule: StepSchedule::Diminishing { initial: args.step },
        tol: args.tol,
        lower: LowerBoundConfig {
            samples: args.samples,
            seed,
            ..LowerBoundConfig::default()
        },
    })
}

fn rescale_one(path: &Path, cfg: &OptimizeConfig) -> anyhow::Result<ReportRecord> {
    let (_, pair) = read_pair(path)?;
    let mut rec = base_record(path, &pair)?;
    let bracket =
        rescale::optimize(&pair, cfg).with_context(|| format!("optimizing {}", path.display()))?;
    let scaling = rescale::extract_scaling(&pair, &bracket.weights)?;
    let cap = bracket.m_upper + CERT_TOL;
    rec.check_results.insert(
        "certificate".into(),
        scaling.bessel_x() <= cap && scaling.bessel_y() <= cap,
    );
    rec.check_results
        .insert("bracket".into(), bracket.m_lower <= cap);
    if rec
        .schauder_deviation
        .is_some_and(|d| d <= SCHAUDER_CHECK_TOL)
    {
        rec.check_results.insert(
            "frames".into(),
            scaling.x_bounds.lower > FRAME_TOL && scaling.y_bounds.lower > FRAME_TOL,
        );
    }
    rec.m_upper = Some(bracket.m_upper);
    rec.m_lower = Some(bracket.m_lower);
    rec.bessel_x = Some(scaling.bessel_x());
    rec.bessel_y = Some(scaling.bessel_y());
    rec.weights = Some(scaling.alpha);
    Ok(rec)
}

pub fn rescale(args: &RescaleArgs, seed: u64) -> anyhow::Result<i32> {
    let cfg = optimize_config(&args.optimizer, seed)?;
    let paths = expand_inputs(&args.inputs)?;
    let records = paths
        .par_iter()
        .map(|p| rescale_one(p, &cfg))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let report = ReportFile::new("rescale", seed, records);
    report.emit(args.out.as_deref())?;
    Ok(status(report.summary.failures == 0))
}

pub fn verify(args: &VerifyArgs, seed: u64) -> anyhow::Result<i32> {
    let cfg = SuiteConfig {
        seed,
        instances: args.instances,
        n_max: args.n,
        d_max: args.d,
        phase_steps: args.phase_steps,
        optimize: optimize_config(&args.optimizer, seed)?,
        ..SuiteConfig::default()
    };
    let mut report = ReportFile::new("verify", seed, Vec::new());
    for suite in args.suite.suites() {
        let r = verify::run_suite(suite, &cfg)?;
        eprintln!("{suite}: {} cases, {} failures", r.cases, r.failures.len());
        report.suites.push(r);
    }
    report.summarize();
    let replay_dir = replay_dir(args);
    for s in &report.suites {
        for f in &s.failures {
            let Some(pair) = &f.pair else { continue };
            let file = InstanceFile::from_pair(
                pair,
                Some(Metadata {
                    seed: Some(seed),
                    generator: Some(format!("framescale verify --suite {}", s.suite)),
                    description: Some(format!("case {}: {}", f.case, f.message)),
                }),
            );
            let path = replay_dir.join(format!("{}-{}.json", s.suite, f.case));
            file.write(&path)?;
            eprintln!("replay: {}", path.display());
        }
    }
    report.emit(args.out.as_deref())?;
    Ok(status(report.summary.failures == 0))
}

fn replay_dir(args: &VerifyArgs) -> PathBuf {
    match (&args.replay_dir, &args.out) {
        (Some(d), _) => d.clone(),
        (None, Some(out)) => out
            .parent()
            .map_or_else(|| PathBuf::from("replay"), |p| p.join("replay")),
        (None, None) => PathBuf::from("replay"),
    }
}

#[derive(Debug, Serialize)]
struct BenchCell {
    n: usize,
    d: usize,
    instances: usize,
    /// SHA-256 of the serialized workload.
    checksum: String,
    seconds: BTreeMap<&'static str, f64>,
    total_seconds: f64,
    within_budget: bool,
}

#[derive(Debug, Serialize)]
struct BenchReport {
    seed: u64,
    phase_steps: usize,
    budget_seconds: f64,
    cells: Vec<BenchCell>,
}

pub fn parse_grid(spec: &str) -> anyhow::Result<Vec<(usize, usize)>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|cell| {
            let (n, d) = cell
                .split_once(['x', 'X'])
                .with_context(|| format!("grid cell `{cell}` is not of the form NxD"))?;
            let n: usize = n.parse().with_context(|| format!("bad n in `{cell}`"))?;
            let d: usize = d.parse().with_context(|| format!("bad d in `{cell}`"))?;
            if n == 0 || d == 0 {
                bail!("grid cell `{cell}` must have n, d >= 1");
            }
            Ok((n, d))
        })
        .collect()
}

fn timed<T>(
    seconds: &mut BTreeMap<&'static str, f64>,
    key: &'static str,
    f: impl FnOnce() -> T,
) -> T {
    let start = Instant::now();
    let out = f();
    *seconds.entry(key).or_default() += start.elapsed().as_secs_f64();
    out
}

pub fn bench(args: &BenchArgs, seed: u64) -> anyhow::Result<i32> {
    let grid = parse_grid(&args.grid)?;
    let opt = OptimizeConfig::default();
    let mut cells = Vec::with_capacity(grid.len());
    for (c, &(n, d)) in grid.iter().enumerate() {
        let mut hasher = Sha256::new();
        let mut seconds = BTreeMap::new();
        let start = Instant::now();
        for i in 0..args.instances {
            let mut rng = random::substream(seed, ((c as u64) << 32) + i as u64);
            let pair = generate::generate_with(&mut rng, InstanceKind::Gaussian, n, d, None)?;
            hasher.update(InstanceFile::from_pair(&pair, None).to_json().as_bytes());
            timed(&mut seconds, "frame_bounds", || {
                frames::bessel_and_frame_bounds(pair.xs()).map(|_| ())
            })?;
            timed(&mut seconds, "alternating", || {
                multiplier::norm_lower_alternating_with(&pair, &AlternatingConfig::default())
                    .map(|_| ())
            })?;
            if n <= MAX_GRID_TERMS {
                timed(&mut seconds, "grid_oracle", || {
                    multiplier::norm_oracle_grid(&pair, args.phase_steps).map(|_| ())
                })?;
            }
            let bracket = timed(&mut seconds, "optimize", || rescale::optimize(&pair, &opt))?;
            timed(&mut seconds, "dilation", || {
                rescale::build_dilation(&pair, &bracket.weights, bracket.m_upper).map(|_| ())
            })?;
        }
        let total_seconds = start.elapsed().as_secs_f64();
        let checksum = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        cells.push(BenchCell {
            n,
            d,
            instances: args.instances,
            checksum,
            seconds,
            total_seconds,
            within_budget: total_seconds <= args.budget,
        });
    }
    let ok = cells.iter().all(|c| c.within_budget);
    let report = BenchReport {
        seed,
        phase_steps: args.phase_steps,
        budget_seconds: args.budget,
        cells,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    match &args.out {
        Some(p) => write_text(p, &text)?,
        None => print!("{text}"),
    }
    Ok(status(ok))
}
