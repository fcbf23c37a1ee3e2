use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::generate::InstanceKind;
use crate::verify::Suite;

#[derive(Debug, Parser)]
#[command(
    name = "framescale",
    version,
    about = "Frame rescaling, multiplier norms and cb-norm brackets"
)]
pub struct Cli {
    /// Seed for every random choice; the environment default is overridden
    /// by the flag.
    #[arg(long, global = true, env = "FRAMESCALE_SEED", default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Frame bounds, Schauder deviation and multiplier-norm estimates.
    Analyze(AnalyzeArgs),
    /// Optimal rescaling weights and the cb-norm bracket.
    Rescale(RescaleArgs),
    /// Run verification suites; exit status 0 iff nothing failed.
    Verify(VerifyArgs),
    /// Time each operation class over an (n, d) grid.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum KindArg {
    Gaussian,
    SchauderMangled,
    OnbUnion,
    D1Scalars,
}

impl From<KindArg> for InstanceKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Gaussian => InstanceKind::Gaussian,
            KindArg::SchauderMangled => InstanceKind::SchauderMangled,
            KindArg::OnbUnion => InstanceKind::OnbUnion,
            KindArg::D1Scalars => InstanceKind::D1Scalars,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// Smallest mangling modulus `|β_k|`.
    #[arg(long, requires = "scale_max")]
    pub scale_min: Option<f64>,
    /// Largest mangling modulus `|β_k|`.
    #[arg(long, requires = "scale_min")]
    pub scale_max: Option<f64>,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    /// Stop once a step moves the log-weights by less than this.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    /// Initial step `s₀` of the schedule `s₀/√(i+1)`.
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    /// Random amplified inputs tried for the lower bound.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Instance files or directories of `*.json` instances.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Phase-grid resolution for the `‖Φ‖` oracle (skipped when n > 6).
    #[arg(long, default_value_t = 48)]
    pub phase_steps: usize,
    /// Report path; a `.csv` export is written beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RescaleArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Khintchine,
    Trace,
    Chain,
    Ratio,
    Dilation,
    All,
}

impl SuiteArg {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Khintchine => vec![Suite::Khintchine],
            SuiteArg::Trace => vec![Suite::Trace],
            SuiteArg::Chain => vec![Suite::Chain],
            SuiteArg::Ratio => vec![Suite::Ratio],
            SuiteArg::Dilation => vec![Suite::Dilation],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteArg,
    /// Ratio-suite instance count.
    #[arg(long, default_value_t = 200)]
    pub instances: usize,
    /// Largest n drawn for random pairs.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Largest d drawn for random pairs.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value_t = 48)]
    pub phase_steps: usize,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for failing instances; defaults to `replay/` beside the
    /// report, or the working directory.
    #[arg(long)]
    pub replay_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated `NxD` cells, e.g. `3x2,5x3`; empty for none.
    #[arg(long, default_value = "3x2,5x3")]
    pub grid: String,
    /// Instances per cell.
    #[arg(long, default_value_t = 3)]
    pub instances: usize,
    #[arg(long, default_value_t = 48)]
    pub phase_steps: usize,
    /// Wall-time budget per cell in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub budget: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
