//! Run configuration, stored as TOML.
//!
//! ```toml
//! spectral = [0.0, 0.5, 1.0]
//!
//! [couplings]
//! g1 = 1.0
//!
//! [quadrature]
//! relTol = 1e-12
//! qmcSamples = 1048576
//! seed = 20240601
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use numeric::{Budget, Contour};
use serde::{Deserialize, Serialize};
use symexpr::Sym;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfig {
    /// Spectral parameters swept by the one-variable eigenfunction checks.
    #[serde(default = "default_spectral")]
    pub spectral: Vec<f64>,
    /// Values of `g1, g2, ...` (and `a`) used by the numeric checks;
    /// couplings not listed default to 1.
    #[serde(default = "default_couplings")]
    pub couplings: BTreeMap<String, f64>,
    #[serde(default)]
    pub contour: ContourConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_spectral() -> Vec<f64> {
    vec![0.0, 0.5, 1.0]
}

fn default_couplings() -> BTreeMap<String, f64> {
    (1..=3).map(|i| (format!("g{i}"), 1.0)).collect()
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            spectral: default_spectral(),
            couplings: default_couplings(),
            contour: ContourConfig::default(),
            quadrature: QuadratureConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ContourConfig {
    pub window: f64,
    pub branch_offset: f64,
    #[serde(default = "one")]
    pub qmc_scale: f64,
    #[serde(default)]
    pub offsets: BTreeMap<String, f64>,
    #[serde(default)]
    pub centers: BTreeMap<String, f64>,
}

fn one() -> f64 {
    1.0
}

impl Default for ContourConfig {
    fn default() -> Self {
        let c = Contour::default();
        ContourConfig { window: c.window, branch_offset: c.branch_offset, qmc_scale: c.qmc_scale, offsets: c.offsets, centers: c.centers }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_depth: u32,
    pub qmc_samples: u64,
    pub seed: u64,
    #[serde(default = "sixteen")]
    pub replicates: u32,
}

fn sixteen() -> u32 {
    16
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let b = Budget::default();
        QuadratureConfig { rel_tol: b.rel_tol, max_depth: b.max_depth, qmc_samples: b.qmc_samples, seed: b.seed, replicates: b.replicates }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { path: PathBuf::from("report.json") }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
        let cfg = RunConfig::from_toml(&text)?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<RunConfig, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in &self.couplings {
            if Sym::parse(name).is_none() {
                return Err(CliError::Config(format!("unknown coupling {name}")));
            }
            let ok = if name == "a" { v.is_finite() } else { v.is_finite() && *v > 0.0 };
            if !ok {
                return Err(CliError::Config(format!("coupling {name} must be positive and finite, got {v}")));
            }
        }
        if let Some(v) = self.spectral.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Config(format!("spectral parameters must be finite, got {v}")));
        }
        // TOML integers are signed
        if self.quadrature.seed > i64::MAX as u64 || self.quadrature.qmc_samples > i64::MAX as u64 {
            return Err(CliError::Config("seed and qmcSamples must be below 2^63".into()));
        }
        self.contour().validate().map_err(|e| CliError::Config(e.to_string()))?;
        self.budget().validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn contour(&self) -> Contour {
        let c = &self.contour;
        Contour { window: c.window, branch_offset: c.branch_offset, offsets: c.offsets.clone(), centers: c.centers.clone(), qmc_scale: c.qmc_scale }
    }

    pub fn budget(&self) -> Budget {
        let q = &self.quadrature;
        Budget { rel_tol: q.rel_tol, max_depth: q.max_depth, qmc_samples: q.qmc_samples, seed: q.seed, replicates: q.replicates }
    }

    /// Coupling value, 1 when unset.
    pub fn coupling(&self, name: &str) -> f64 {
        self.couplings.get(name).copied().unwrap_or(1.0)
    }

    /// The first `k` couplings `g1..gk`.
    pub fn couplings_for(&self, k: u32) -> BTreeMap<String, f64> {
        (1..=k).map(|i| (format!("g{i}"), self.coupling(&format!("g{i}")))).collect()
    }
}
