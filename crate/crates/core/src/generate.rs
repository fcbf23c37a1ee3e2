//! Seeded generators for test and experiment corpora.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::frames::{self, FrameError, FramePair};
use crate::random;

/// Largest `‖T − I‖` accepted for a generated Schauder pair before mangling.
pub const SCHAUDER_TOL: f64 = 1e-10;

/// Default mangling range for [`InstanceKind::SchauderMangled`].
pub const DEFAULT_MANGLE_RANGE: (f64, f64) = (1e-3, 1e3);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    /// Independent complex Gaussian `x_k`, `y_k`.
    Gaussian,
    /// Gaussian frame with its canonical dual, then rescaled.
    SchauderMangled,
    /// `n/d` Haar-random orthonormal bases, `y_k = x_k d/n`.
    OnbUnion,
    /// `d = 1` with nonzero complex scalars.
    D1Scalars,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 4] = [
        InstanceKind::Gaussian,
        InstanceKind::SchauderMangled,
        InstanceKind::OnbUnion,
        InstanceKind::D1Scalars,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::Gaussian => "gaussian",
            InstanceKind::SchauderMangled => "schauder_mangled",
            InstanceKind::OnbUnion => "onb_union",
            InstanceKind::D1Scalars => "d1_scalars",
        }
    }
}

impl std::str::FromStr for InstanceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown instance kind `{s}`"))
    }
}

impl std::fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenerateError {
    #[error("n and d must be at least 1 (got n = {n}, d = {d})")]
    EmptyShape { n: usize, d: usize },
    #[error("{kind} needs {requirement} (got n = {n}, d = {d})")]
    Shape {
        kind: InstanceKind,
        requirement: &'static str,
        n: usize,
        d: usize,
    },
    #[error("invalid scaling range [{lo}, {hi}]")]
    Range { lo: f64, hi: f64 },
    #[error("generated dual pair deviates from the identity by {deviation:e}")]
    NotSchauder { deviation: f64 },
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerateConfig {
    pub kind: InstanceKind,
    pub n: usize,
    pub d: usize,
    /// Range of `|β_k|` for the mangling `(β_k x_k, β̄_k⁻¹ y_k)`; `None`
    /// uses [`DEFAULT_MANGLE_RANGE`] for Schauder pairs and no mangling
    /// otherwise.
    pub scaling_range: Option<(f64, f64)>,
    pub seed: u64,
}

/// Draws one pair; the same config always gives the same pair.
pub fn generate(cfg: &GenerateConfig) -> Result<FramePair, GenerateError> {
    let mut rng = random::seeded(cfg.seed);
    generate_with(&mut rng, cfg.kind, cfg.n, cfg.d, cfg.scaling_range)
}

pub fn generate_with<R: Rng + ?Sized>(
    rng: &mut R,
    kind: InstanceKind,
    n: usize,
    d: usize,
    scaling_range: Option<(f64, f64)>,
) -> Result<FramePair, GenerateError> {
    if n == 0 || d == 0 {
        return Err(GenerateError::EmptyShape { n, d });
    }
    let shape = |requirement| GenerateError::Shape {
        kind,
        requirement,
        n,
        d,
    };
    let pair = match kind {
        InstanceKind::Gaussian => gaussian(rng, n, d)?,
        InstanceKind::SchauderMangled => {
            if n < d {
                return Err(shape("n >= d"));
            }
            schauder(rng, n, d)?
        }
        InstanceKind::OnbUnion => {
            if !n.is_multiple_of(d) {
                return Err(shape("n to be a multiple of d"));
            }
            onb_union(rng, n, d)?
        }
        InstanceKind::D1Scalars => {
            if d != 1 {
                return Err(shape("d = 1"));
            }
            gaussian(rng, n, 1)?
        }
    };
    let range = match (scaling_range, kind) {
        (Some(r), _) => r,
        (None, InstanceKind::SchauderMangled) => DEFAULT_MANGLE_RANGE,
        (None, _) => (1.0, 1.0),
    };
    if range == (1.0, 1.0) {
        return Ok(pair);
    }
    mangle(rng, &pair, range)
}

/// `(β_k x_k, β̄_k⁻¹ y_k)` with `|β_k|` log-uniform in `range` and uniform
/// phase.
pub fn mangle<R: Rng + ?Sized>(
    rng: &mut R,
    pair: &FramePair,
    range: (f64, f64),
) -> Result<FramePair, GenerateError> {
    let (lo, hi) = range;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(GenerateError::Range { lo, hi });
    }
    let betas: Vec<Complex64> = (0..pair.len())
        .map(|_| random::unit_phase(rng) * random::log_uniform(rng, lo, hi))
        .collect();
    Ok(pair.rescaled(&betas)?)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize) -> Result<FramePair, GenerateError> {
    let xs = (0..n).map(|_| random::gaussian_vector(rng, d)).collect();
    let ys = (0..n).map(|_| random::gaussian_vector(rng, d)).collect();
    Ok(FramePair::new(xs, ys)?)
}

fn schauder<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize) -> Result<FramePair, GenerateError> {
    let xs: Vec<_> = (0..n).map(|_| random::gaussian_vector(rng, d)).collect();
    let ys = frames::canonical_dual(&xs)?;
    let pair = FramePair::new(xs, ys)?;
    let deviation = frames::schauder_deviation(&pair);
    if deviation > SCHAUDER_TOL {
        return Err(GenerateError::NotSchauder { deviation });
    }
    Ok(pair)
}

fn onb_union<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize) -> Result<FramePair, GenerateError> {
    let copies = n / d;
    let mut xs = Vec::with_capacity(n);
    for _ in 0..copies {
        let u = random::haar_unitary(rng, d);
        xs.extend((0..d).map(|j| u.column(j)));
    }
    let shrink = Complex64::new(1.0 / copies as f64, 0.0);
    let ys = xs
        .iter()
        .map(|x| x.iter().map(|z| z * shrink).collect())
        .collect();
    Ok(FramePair::new(xs, ys)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{bessel_and_frame_bounds, is_schauder_identity};

    fn cfg(kind: InstanceKind, n: usize, d: usize) -> GenerateConfig {
        GenerateConfig {
            kind,
            n,
            d,
            scaling_range: None,
            seed: 3,
        }
    }

    #[test]
    fn onb_union_frame_operator() {
        let pair = generate(&cfg(InstanceKind::OnbUnion, 6, 3)).unwrap();
        let b = bessel_and_frame_bounds(pair.xs()).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-12 && (b.upper - 2.0).abs() < 1e-12);
        assert!(is_schauder_identity(&pair, 1e-12));
    }

    #[test]
    fn mangled_schauder_keeps_identity() {
        let pair = generate(&cfg(InstanceKind::SchauderMangled, 5, 3)).unwrap();
        assert!(is_schauder_identity(&pair, 1e-9));
    }

    #[test]
    fn deterministic() {
        for kind in InstanceKind::ALL {
            let d = if kind == InstanceKind::D1Scalars {
                1
            } else {
                2
            };
            let a = generate(&cfg(kind, 4, d)).unwrap();
            let b = generate(&cfg(kind, 4, d)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn shape_errors() {
        assert!(generate(&cfg(InstanceKind::OnbUnion, 5, 2)).is_err());
        assert!(generate(&cfg(InstanceKind::SchauderMangled, 1, 2)).is_err());
        assert!(generate(&cfg(InstanceKind::D1Scalars, 3, 2)).is_err());
        assert!(generate(&cfg(InstanceKind::Gaussian, 0, 2)).is_err());
        let mut bad = cfg(InstanceKind::Gaussian, 3, 2);
        bad.scaling_range = Some((2.0, 1.0));
        assert!(matches!(generate(&bad), Err(GenerateError::Range { .. })));
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in InstanceKind::ALL {
            assert_eq!(kind.name().parse::<InstanceKind>().unwrap(), kind);
        }
        assert!("banana".parse::<InstanceKind>().is_err());
    }
}
