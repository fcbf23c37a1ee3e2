//! Optimal rescaling weights and the completely bounded norm bracket.
//!
//! For positive weights `w_k`, put `x̃_k = w_k x_k` and `ỹ_k = w_k⁻¹ y_k`.
//! The rescaled pair defines the same multiplier map, and the factorization
//! `Φ(a) = X̃ · diag(a) · Ỹ*` certifies `‖Φ‖_cb ≤ ‖X̃‖·‖Ỹ‖ = √(f·g)` where
//! `f`, `g` are the Bessel bounds of the two rescaled families.
//!
//! Weights are parameterized by `t_k = ln(w_k²)`, which makes
//! `f(t) = λ_max(Σ e^{t_k} x_k x_k*)` and `g(t) = λ_max(Σ e^{−t_k} y_k y_k*)`
//! convex, and `h = max(f, g)` is minimized by projected subgradient descent.

mod dilation;

pub use dilation::{
    build_dilation, dilation_reconstruct, rank_one_residual, Dilation, PADDING_TOL,
};

use serde::{Deserialize, Serialize};

use crate::frames::{self, FrameBounds, FrameError, FramePair};
use crate::linalg::{self, hermitian_extreme_eig, LinalgError};
use crate::multiplier::{self, AlternatingConfig, MultiplierError};

/// Relative gap under which `f` and `g` count as tied in [`subgradient`].
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RescaleError {
    #[error("{found} weights for {expected} vectors")]
    WeightCount { expected: usize, found: usize },
    #[error("log-weight {index} is not finite")]
    NonFiniteWeight { index: usize },
    #[error("Bessel bounds must be positive to balance, got f = {f}, g = {g}")]
    DegenerateObjective { f: f64, g: f64 },
    #[error("{family} family has Bessel bound {bessel} above dilation scale {scale}")]
    PaddingNotPsd {
        family: &'static str,
        bessel: f64,
        scale: f64,
    },
    #[error("optimizer reached a non-finite state at iteration {iteration}")]
    NonFiniteState { iteration: usize },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Multiplier(#[from] MultiplierError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, RescaleError>;

/// Log-weights `t_k = ln(w_k²)`; the rescaling scalars are `w_k = e^{t_k/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogWeights(Vec<f64>);

impl LogWeights {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if let Some(index) = t.iter().position(|v| !v.is_finite()) {
            return Err(RescaleError::NonFiniteWeight { index });
        }
        Ok(Self(t))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// Log-weights realizing the given positive scalars `w_k`.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        Self::new(w.iter().map(|x| 2.0 * x.ln()).collect())
    }

    /// `t_k = ln(‖y_k‖ / ‖x_k‖)`, which equalizes `‖x̃_k‖ = ‖ỹ_k‖`. This
    /// start transforms covariantly under `(β_k x_k, β̄_k⁻¹ y_k)`.
    pub fn norm_balanced(pair: &FramePair) -> Self {
        Self(
            pair.xs()
                .iter()
                .zip(pair.ys())
                .map(|(x, y)| (linalg::norm(y) / linalg::norm(x)).ln())
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `w_k = e^{t_k/2}`.
    pub fn weights(&self) -> Vec<f64> {
        self.0.iter().map(|t| (0.5 * t).exp()).collect()
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self(self.0.iter().map(|t| t + c).collect())
    }

    fn check(&self, pair: &FramePair) -> Result<()> {
        if self.len() != pair.len() {
            return Err(RescaleError::WeightCount {
                expected: pair.len(),
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// Bessel bounds `(f, g)` of `{w_k x_k}` and `{w_k⁻¹ y_k}`.
pub fn bessel_pair_objective(pair: &FramePair, t: &LogWeights) -> Result<(f64, f64)> {
    let s = Spectra::at(pair, t)?;
    Ok((s.f, s.g))
}

/// Top eigenpairs of both weighted frame operators.
struct Spectra {
    f: f64,
    g: f64,
    v_f: Vec<num_complex::Complex64>,
    v_g: Vec<num_complex::Complex64>,
}

impl Spectra {
    fn at(pair: &FramePair, t: &LogWeights) -> Result<Self> {
        t.check(pair)?;
        let tv = t.as_slice();
        let sx = frames::weighted_frame_operator(pair.xs(), |k| tv[k].exp())?;
        let sy = frames::weighted_frame_operator(pair.ys(), |k| (-tv[k]).exp())?;
        let ex = hermitian_extreme_eig(&sx, linalg::DEFAULT_TOL)?;
        let ey = hermitian_extreme_eig(&sy, linalg::DEFAULT_TOL)?;
        Ok(Self {
            f: ex.lambda_max,
            g: ey.lambda_max,
            v_f: ex.v_max,
            v_g: ey.v_max,
        })
    }
}

/// Shifts `t` by `c = ½ ln(g/f)`, after which `f = g = √(f g)`.
pub fn balance(pair: &FramePair, t: &LogWeights) -> Result<LogWeights> {
    let (f, g) = bessel_pair_objective(pair, t)?;
    if !(f > 0.0 && g > 0.0) {
        return Err(RescaleError::DegenerateObjective { f, g });
    }
    Ok(t.shifted(0.5 * (g / f).ln()))
}

/// A subgradient of `h(t) = max(f(t), g(t))`.
///
/// `∂f/∂t_k = e^{t_k}|⟨v_f, x_k⟩|²` and `∂g/∂t_k = −e^{−t_k}|⟨v_g, y_k⟩|²`
/// for top unit eigenvectors `v_f`, `v_g`. Within [`TIE_TOL`] of a tie the
/// two halves are averaged.
pub fn subgradient(pair: &FramePair, t: &LogWeights) -> Result<Vec<f64>> {
    let s = Spectra::at(pair, t)?;
    Ok(subgradient_from(pair, t, &s))
}

fn subgradient_from(pair: &FramePair, t: &LogWeights, s: &Spectra) -> Vec<f64> {
    let (df, dg) = partials(pair, t, s);
    let tie = (s.f - s.g).abs() <= TIE_TOL * s.f.max(s.g);
    if tie {
        df.iter().zip(&dg).map(|(a, b)| 0.5 * (a + b)).collect()
    } else if s.f > s.g {
        df
    } else {
        dg
    }
}

fn partials(pair: &FramePair, t: &LogWeights, s: &Spectra) -> (Vec<f64>, Vec<f64>) {
    let tv = t.as_slice();
    let df = pair
        .xs()
        .iter()
        .zip(tv)
        .map(|(x, tk)| tk.exp() * linalg::inner(&s.v_f, x).norm_sqr())
        .collect();
    let dg = pair
        .ys()
        .iter()
        .zip(tv)
        .map(|(y, tk)| -(-tk).exp() * linalg::inner(&s.v_g, y).norm_sqr())
        .collect();
    (df, dg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StepSchedule {
    /// `s_i = initial / √(i + 1)`.
    Diminishing {
        initial: f64,
    },
    Constant {
        step: f64,
    },
}

impl StepSchedule {
    pub fn step(&self, i: usize) -> f64 {
        match *self {
            StepSchedule::Diminishing { initial } => initial / ((i + 1) as f64).sqrt(),
            StepSchedule::Constant { step } => step,
        }
    }
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule::Diminishing { initial: 1.0 }
    }
}

/// Effort spent on the lower end of the bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundConfig {
    /// Amplification level; `None` uses `m = d`, which suffices for maps
    /// into `B(ℂ^d)`.
    pub m: Option<usize>,
    pub samples: usize,
    /// Restarts of the `‖Φ‖` ascent whose best mask is embedded as
    /// `A_k = ε_k I_m`; zero skips it.
    pub alternating_restarts: usize,
    pub ascent_starts: usize,
    pub ascent_iters: usize,
    pub seed: u64,
}

impl Default for LowerBoundConfig {
    fn default() -> Self {
        Self {
            m: None,
            samples: 8,
            alternating_restarts: 4,
            ascent_starts: 4,
            ascent_iters: 300,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub max_iters: usize,
    pub schedule: StepSchedule,
    /// Stop once a step moves `t` by less than this.
    pub tol: f64,
    pub lower: LowerBoundConfig,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            schedule: StepSchedule::default(),
            tol: 1e-7,
            lower: LowerBoundConfig::default(),
        }
    }
}

/// Certified interval `[m_lower, m_upper]` around `‖Φ‖_cb`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CbBracket {
    pub m_upper: f64,
    pub m_lower: f64,
    pub weights: LogWeights,
    /// Bessel bound of `{w_k x_k}` at `weights`.
    pub f: f64,
    /// Bessel bound of `{w_k⁻¹ y_k}` at `weights`.
    pub g: f64,
    pub iterations: usize,
    /// Best-so-far `max(f, g)` after each iteration.
    pub history: Vec<f64>,
}

/// Minimizes `max(f, g)` over log-weights.
///
/// Starts from [`LogWeights::norm_balanced`] and balances after every step,
/// so the iterate always has `f = g`. Steps follow the subgradient of
/// `ln h`, which is scale-free: its components lie in `[−½, ½]`.
pub fn optimize(pair: &FramePair, cfg: &OptimizeConfig) -> Result<CbBracket> {
    let mut t = balance(pair, &LogWeights::norm_balanced(pair))?;
    let mut spectra = Spectra::at(pair, &t)?;
    let mut best_t = t.clone();
    let mut best = spectra.f.max(spectra.g);
    let mut history = Vec::with_capacity(cfg.max_iters + 1);
    history.push(best);
    let mut iterations = 0;

    for i in 0..cfg.max_iters {
        let h = spectra.f.max(spectra.g);
        let direction: Vec<f64> = subgradient_from(pair, &t, &spectra)
            .iter()
            .map(|g| g / h)
            .collect();
        let step = cfg.schedule.step(i);
        let movement = step * direction.iter().map(|d| d * d).sum::<f64>().sqrt();
        iterations = i + 1;
        if movement < cfg.tol {
            break;
        }
        let next: Vec<f64> = t
            .as_slice()
            .iter()
            .zip(&direction)
            .map(|(tk, dk)| tk - step * dk)
            .collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(RescaleError::NonFiniteState { iteration: i });
        }
        t = balance(pair, &LogWeights(next))?;
        spectra = Spectra::at(pair, &t)?;
        let value = spectra.f.max(spectra.g);
        if !value.is_finite() {
            return Err(RescaleError::NonFiniteState { iteration: i });
        }
        if value < best {
            best = value;
            best_t = t.clone();
        }
        history.push(best);
    }

    let (f, g) = bessel_pair_objective(pair, &best_t)?;
    let m_upper = f.max(g);
    let m_lower = cb_lower_bound(pair, &cfg.lower)?;
    Ok(CbBracket {
        m_upper,
        m_lower,
        weights: best_t,
        f,
        g,
        iterations,
        history,
    })
}

/// Best of sampled amplifications, the embedded `‖Φ‖` witness and
/// contraction ascent at level `m`.
pub fn cb_lower_bound(pair: &FramePair, cfg: &LowerBoundConfig) -> Result<f64> {
    let m = cfg.m.unwrap_or(pair.dim()).max(1);
    let masks = if cfg.alternating_restarts > 0 {
        let alt = multiplier::norm_lower_alternating_with(
            pair,
            &AlternatingConfig {
                restarts: cfg.alternating_restarts,
                seed: cfg.seed,
                ..AlternatingConfig::default()
            },
        )?;
        vec![alt.witness_mask]
    } else {
        Vec::new()
    };
    let sampled = multiplier::cb_lower_sampled_with_masks(pair, m, cfg.samples, cfg.seed, &masks)?;
    let ascent = if cfg.ascent_starts > 0 {
        multiplier::cb_lower_ascent(pair, m, cfg.ascent_starts, cfg.ascent_iters, cfg.seed)?
    } else {
        0.0
    };
    Ok(sampled.max(ascent))
}

/// Rescaling scalars and the frame bounds of both rescaled families.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scaling {
    /// `α_k = w_k > 0`.
    pub alpha: Vec<f64>,
    /// Frame bounds of `{α_k x_k}`.
    pub x_bounds: FrameBoundsRecord,
    /// Frame bounds of `{α_k⁻¹ y_k}`.
    pub y_bounds: FrameBoundsRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBoundsRecord {
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
}

impl From<FrameBounds> for FrameBoundsRecord {
    fn from(b: FrameBounds) -> Self {
        Self {
            lower: b.lower,
            upper: b.upper,
            is_frame: b.is_frame,
        }
    }
}

impl Scaling {
    pub fn bessel_x(&self) -> f64 {
        self.x_bounds.upper
    }

    pub fn bessel_y(&self) -> f64 {
        self.y_bounds.upper
    }
}

/// Applies the weights: `α_k = w_k`, families `{α_k x_k}` and `{ᾱ_k⁻¹ y_k}`.
pub fn extract_scaling(pair: &FramePair, weights: &LogWeights) -> Result<Scaling> {
    weights.check(pair)?;
    let alpha = weights.weights();
    let scaled = scaled_pair(pair, weights)?;
    Ok(Scaling {
        x_bounds: frames::bessel_and_frame_bounds(scaled.xs())?.into(),
        y_bounds: frames::bessel_and_frame_bounds(scaled.ys())?.into(),
        alpha,
    })
}

/// The rescaled pair `(w_k x_k, w_k⁻¹ y_k)`.
pub fn scaled_pair(pair: &FramePair, weights: &LogWeights) -> Result<FramePair> {
    weights.check(pair)?;
    let betas: Vec<num_complex::Complex64> = weights
        .weights()
        .iter()
        .map(|&w| num_complex::Complex64::new(w, 0.0))
        .collect();
    Ok(pair.rescaled(&betas)?)
}
