//! Instance and report file formats.
//!
//! Complex numbers are `[re, im]` pairs. Floats are written in the shortest
//! decimal form that parses back to the same `f64`, so files round-trip
//! bit-exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::frames::FramePair;
use crate::verify::SuiteReport;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub dim: usize,
    pub pairs: Vec<PairEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub x: Vec<[f64; 2]>,
    pub y: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

fn encode(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn decode(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl InstanceFile {
    pub fn from_pair(pair: &FramePair, metadata: Option<Metadata>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            dim: pair.dim(),
            pairs: pair
                .xs()
                .iter()
                .zip(pair.ys())
                .map(|(x, y)| PairEntry {
                    x: encode(x),
                    y: encode(y),
                })
                .collect(),
            metadata,
        }
    }

    /// Validates the file and builds the pair. Errors name the offending
    /// field, e.g. `pairs[2].y`.
    pub fn to_pair(&self) -> anyhow::Result<FramePair> {
        if self.format_version != FORMAT_VERSION {
            bail!(
                "format_version: expected {FORMAT_VERSION}, found {}",
                self.format_version
            );
        }
        if self.pairs.is_empty() {
            bail!("pairs: at least one entry is required");
        }
        for (k, p) in self.pairs.iter().enumerate() {
            for (name, v) in [("x", &p.x), ("y", &p.y)] {
                if v.len() != self.dim {
                    bail!(
                        "pairs[{k}].{name}: length {} but dim is {}",
                        v.len(),
                        self.dim
                    );
                }
                if v.iter().flatten().any(|c| !c.is_finite()) {
                    bail!("pairs[{k}].{name}: non-finite coordinate");
                }
                if v.iter().all(|&[re, im]| re == 0.0 && im == 0.0) {
                    bail!("pairs[{k}].{name}: zero vector");
                }
            }
        }
        let xs = self.pairs.iter().map(|p| decode(&p.x)).collect();
        let ys = self.pairs.iter().map(|p| decode(&p.y)).collect();
        Ok(FramePair::new(xs, ys)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            anyhow::anyhow!(
                "line {} column {}: {}",
                e.line(),
                e.column(),
                strip_position(&e.to_string())
            )
        })
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        write_text(path, &self.to_json())
    }
}

fn strip_position(msg: &str) -> &str {
    msg.rsplit_once(" at line ").map_or(msg, |(head, _)| head)
}

/// Reads one pair from an instance file with the path attached to errors.
pub fn read_pair(path: &Path) -> anyhow::Result<(InstanceFile, FramePair)> {
    let file = InstanceFile::read(path)?;
    let pair = file
        .to_pair()
        .with_context(|| format!("invalid instance {}", path.display()))?;
    Ok((file, pair))
}

/// Expands directories into their `*.json` files, sorted by path.
pub fn expand_inputs(inputs: &[PathBuf]) -> anyhow::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)
                .with_context(|| format!("listing {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// One row of a report: everything computed for a single instance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub instance: String,
    pub n: usize,
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_bounds_x: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_bounds_y: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schauder_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_norm_lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_norm_oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_norm_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_lower: Option<f64>,
    /// Rescaling scalars `α_k > 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bessel_x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bessel_y: Option<f64>,
    /// `m_upper / phi_norm_oracle`, present only when both exist.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub check_results: BTreeMap<String, bool>,
}

impl ReportRecord {
    pub fn fill_ratio(&mut self) {
        self.ratio = match (self.m_upper, self.phi_norm_oracle) {
            (Some(m), Some(p)) if p > 0.0 => Some(m / p),
            _ => None,
        };
    }

    pub fn passed(&self) -> bool {
        self.check_results.values().all(|&ok| ok)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ratio: Option<f64>,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub format_version: u32,
    pub command: String,
    pub seed: u64,
    pub records: Vec<ReportRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteReport>,
    pub summary: Summary,
}

impl ReportFile {
    pub fn new(command: &str, seed: u64, records: Vec<ReportRecord>) -> Self {
        let mut r = Self {
            format_version: FORMAT_VERSION,
            command: command.to_string(),
            seed,
            records,
            suites: Vec::new(),
            summary: Summary::default(),
        };
        r.summarize();
        r
    }

    pub fn summarize(&mut self) {
        self.summary.max_ratio = self
            .records
            .iter()
            .filter_map(|r| r.ratio)
            .chain(
                self.suites
                    .iter()
                    .filter_map(|s| s.ratio.as_ref().map(|r| r.max_ratio)),
            )
            .reduce(f64::max);
        self.summary.failures = self.records.iter().filter(|r| !r.passed()).count()
            + self.suites.iter().map(|s| s.failures.len()).sum::<usize>();
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Flat table: one row per record, or per ratio-experiment instance for
    /// verification reports.
    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.records.is_empty() {
            w.write_record([
                "suite",
                "index",
                "n",
                "d",
                "phi_norm_lower",
                "phi_norm_oracle",
                "phi_norm_upper",
                "m_upper",
                "m_lower",
                "ratio",
            ])?;
            for s in &self.suites {
                let Some(ratio) = &s.ratio else { continue };
                for r in &ratio.records {
                    w.write_record(&[
                        s.suite.to_string(),
                        r.index.to_string(),
                        r.n.to_string(),
                        r.d.to_string(),
                        r.phi_norm_lower.to_string(),
                        r.phi_norm_oracle.to_string(),
                        r.phi_norm_upper.to_string(),
                        r.m_upper.to_string(),
                        r.m_lower.to_string(),
                        r.ratio.to_string(),
                    ])?;
                }
            }
        } else {
            w.write_record([
                "instance",
                "n",
                "d",
                "lower_x",
                "upper_x",
                "lower_y",
                "upper_y",
                "schauder_deviation",
                "phi_norm_lower",
                "phi_norm_oracle",
                "phi_norm_upper",
                "m_upper",
                "m_lower",
                "bessel_x",
                "bessel_y",
                "ratio",
                "passed",
            ])?;
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            for r in &self.records {
                w.write_record(&[
                    r.instance.clone(),
                    r.n.to_string(),
                    r.d.to_string(),
                    opt(r.frame_bounds_x.map(|b| b.0)),
                    opt(r.frame_bounds_x.map(|b| b.1)),
                    opt(r.frame_bounds_y.map(|b| b.0)),
                    opt(r.frame_bounds_y.map(|b| b.1)),
                    opt(r.schauder_deviation),
                    opt(r.phi_norm_lower),
                    opt(r.phi_norm_oracle),
                    opt(r.phi_norm_upper),
                    opt(r.m_upper),
                    opt(r.m_lower),
                    opt(r.bessel_x),
                    opt(r.bessel_y),
                    opt(r.ratio),
                    r.passed().to_string(),
                ])?;
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    /// Writes the JSON report to `path` and the CSV export beside it, or
    /// the JSON to standard output when `path` is absent.
    pub fn emit(&self, path: Option<&Path>) -> anyhow::Result<()> {
        match path {
            Some(p) => {
                write_text(p, &self.to_json())?;
                write_text(&p.with_extension("csv"), &self.to_csv()?)
            }
            None => {
                print!("{}", self.to_json());
                Ok(())
            }
        }
    }
}

pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GenerateConfig, InstanceKind};

    fn sample() -> FramePair {
        generate(&GenerateConfig {
            kind: InstanceKind::SchauderMangled,
            n: 4,
            d: 2,
            scaling_range: None,
            seed: 9,
        })
        .unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let pair = sample();
        let file = InstanceFile::from_pair(&pair, None);
        let back = InstanceFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_pair().unwrap(), pair);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let text = r#"{"format_version": 1, "dim": 2, "pairs": [
            {"x": [[1, 0], [0, 0]], "y": [[1, 0]]}
        ]}"#;
        let err = InstanceFile::from_json(text)
            .unwrap()
            .to_pair()
            .unwrap_err();
        assert!(err.to_string().contains("pairs[0].y"), "{err}");
        let err = InstanceFile::from_json("{\"format_version\": 1,\n \"dim\": }").unwrap_err();
        assert!(err.to_string().starts_with("line 2"), "{err}");
        let wrong = r#"{"format_version": 2, "dim": 1, "pairs": [{"x": [[1, 0]], "y": [[1, 0]]}]}"#;
        let err = InstanceFile::from_json(wrong)
            .unwrap()
            .to_pair()
            .unwrap_err();
        assert!(err.to_string().contains("format_version"));
    }

    #[test]
    fn ratio_is_derived() {
        let mut r = ReportRecord {
            m_upper: Some(3.0),
            phi_norm_oracle: Some(2.0),
            ..Default::default()
        };
        r.fill_ratio();
        assert_eq!(r.ratio, Some(1.5));
        r.phi_norm_oracle = None;
        r.fill_ratio();
        assert_eq!(r.ratio, None);
    }
}
