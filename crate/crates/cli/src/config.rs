//! Run configuration: a TOML file overlaid with command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wishprod_core::EnsembleParams;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Sample,
    Density,
    Moments,
    Charpoly,
    Kernel,
    Hardedge,
    Cauchy,
    Bulk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnsembleSection {
    #[serde(rename = "N")]
    pub n: usize,
    pub nu: Vec<u32>,
    pub mu: Vec<u32>,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        Self { n: 10, nu: vec![0], mu: vec![] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McSection {
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

impl Default for McSection {
    fn default() -> Self {
        Self { samples: 100, seed: 1, workers: std::thread::available_parallelism().map_or(1, |n| n.get()) }
    }
}

/// Quadrature settings. `tol` drives the CDF tabulations. The contour
/// fields are validated and recorded in the config hash; every evaluator
/// currently picks its Mellin–Barnes contour automatically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadSection {
    pub tol: f64,
    pub contour_half_height: Option<f64>,
    pub nodes: Option<usize>,
}

impl Default for QuadSection {
    fn default() -> Self {
        Self { tol: 1e-10, contour_half_height: None, nodes: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log_spacing: bool,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { min: 0.1, max: 10.0, count: 50, log_spacing: false }
    }
}

impl GridSection {
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if self.log_spacing {
                    self.min * (self.max / self.min).powf(t)
                } else {
                    self.min + (self.max - self.min) * t
                }
            })
            .collect()
    }

    /// Parses `min:max:count`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must be min:max:count, got '{s}'"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad grid bound '{p}': {e}"));
        let count = parts[2].trim().parse::<usize>().map_err(|e| format!("bad grid count '{}': {e}", parts[2]))?;
        Ok(Self { min: num(parts[0])?, max: num(parts[1])?, count, log_spacing: false })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Standard output when absent.
    pub path: Option<String>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub experiment: Option<Experiment>,
    pub ensemble: EnsembleSection,
    pub mc: McSection,
    pub quad: QuadSection,
    pub grid: GridSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid config file: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.ensemble.n == 0 {
            return bad("ensemble.N must be positive".into());
        }
        if self.ensemble.nu.is_empty() {
            return bad("ensemble.nu must have at least one entry (r ≥ 1)".into());
        }
        if self.mc.samples == 0 {
            return bad("mc.samples must be positive".into());
        }
        if self.mc.workers == 0 {
            return bad("mc.workers must be positive".into());
        }
        if !(self.quad.tol > 0.0) {
            return bad(format!("quad.tol must be positive, got {}", self.quad.tol));
        }
        if let Some(h) = self.quad.contour_half_height {
            if !(h > 0.0) {
                return bad(format!("quad.contour_half_height must be positive, got {h}"));
            }
        }
        if self.quad.nodes == Some(0) {
            return bad("quad.nodes must be positive".into());
        }
        let g = &self.grid;
        if g.count < 2 {
            return bad(format!("grid.count must be at least 2, got {}", g.count));
        }
        if !(g.min > 0.0 && g.max > g.min && g.max.is_finite()) {
            return bad(format!("grid needs 0 < min < max, got [{}, {}]", g.min, g.max));
        }
        Ok(())
    }

    pub fn params(&self) -> CliResult<EnsembleParams> {
        Ok(EnsembleParams::new(self.ensemble.n, self.ensemble.nu.clone(), self.ensemble.mu.clone())?)
    }

    /// SHA-256 of the canonical JSON form of the effective configuration.
    /// The worker count and output path are left out: results do not depend
    /// on them.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.mc.workers = 0;
        c.output.path = None;
        let canonical = serde_json::to_string(&c).expect("config serializes");
        Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}
