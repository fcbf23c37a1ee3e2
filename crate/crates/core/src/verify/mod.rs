//! Executable checks of every inequality and identity in the rescaling
//! argument, with brute-force oracles and seeded experiment corpora.
//!
//! Tolerances: identities are judged at [`IDENTITY_TOL`] relative,
//! inequalities at [`INEQUALITY_TOL`] relative slack, and experiment-level
//! constants at [`RATIO_SLACK`].

mod checks;
mod experiment;
mod rademacher;
mod suites;

pub use checks::{
    holder_trace_check, key_simple_check, super_key_check, trace_lemma_check, trace_pairing_check,
    InequalityCheck, RademacherChain, RankOneBlock, SuperKeyReport, TraceLemmaReport,
    TracePairingReport, MAX_CHAIN,
};
pub use experiment::{
    dilation_check, end_to_end_rescale_check, phi_norm_oracle, ratio_experiment, ratio_instance,
    ratio_record, DilationReport, EndToEndReport, PhiNormOracle, RatioConfig, RatioRecord,
    RatioReport,
};
pub use rademacher::{
    khintchine_check, KhintchineReport, RademacherEnsemble, KHINTCHINE_GAMMA, KHINTCHINE_TOL,
    MAX_KHINTCHINE, MAX_RADEMACHER,
};
pub use suites::{run_suite, Failure, Suite, SuiteConfig, SuiteReport};

use crate::frames::FrameError;
use crate::linalg::LinalgError;
use crate::multiplier::MultiplierError;
use crate::rescale::RescaleError;

pub const IDENTITY_TOL: f64 = 1e-10;
pub const INEQUALITY_TOL: f64 = 1e-9;
/// Relative slack on the constant 2 in ratio experiments.
pub const RATIO_SLACK: f64 = 0.05;
/// The constant `γ⁻² = 2` relating `‖Φ‖_cb` and `‖Φ‖`.
pub const CB_CONSTANT: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("{what} of size {size} exceeds the limit {max}")]
    TooLarge {
        what: &'static str,
        size: usize,
        max: usize,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a Schauder frame: ‖Σ x_k y_k* − I‖ = {deviation:e} exceeds {tol:e}")]
    NotSchauder { deviation: f64, tol: f64 },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Multiplier(#[from] MultiplierError),
    #[error(transparent)]
    Rescale(#[from] RescaleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Generate(#[from] crate::generate::GenerateError),
}

pub type Result<T> = std::result::Result<T, VerifyError>;
