//! Run configuration: built-in defaults, an optional JSON config file
//! (path taken from the `GAUSS_SPECTRAL_CONFIG` environment variable,
//! else `./gauss-spectral.config.json` when that file exists), and
//! command-line flag overrides, applied in that order.

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const ENV_CONFIG: &str = "GAUSS_SPECTRAL_CONFIG";
pub const DEFAULT_CONFIG_PATH: &str = "gauss-spectral.config.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Eigenvalue solver tolerance.
    pub tol: f64,
    /// Gaussian-weight threshold at which infinite domains are truncated.
    pub trunc_weight: f64,
    /// Sample count for reconstructed eigenfunctions.
    pub samples: usize,
    pub format: OutputFormat,
    /// Output file; stdout when absent.
    pub out: Option<PathBuf>,
    /// Worker-pool size for sweep subcommands.
    pub parallelism: usize,
    /// Seed for randomized test-domain generation.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: 1e-9,
            trunc_weight: 1e-18,
            samples: 1201,
            format: OutputFormat::Json,
            out: None,
            parallelism: 1,
            seed: 42,
        }
    }
}

/// Flag-level overrides, valid before any subcommand.
#[derive(Debug, Clone, Args)]
pub struct Overrides {
    /// Solver tolerance (must lie in (1e-14, 1e-2)).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Tail-truncation weight threshold for infinite domains.
    #[arg(long, global = true)]
    pub trunc_weight: Option<f64>,
    /// Eigenfunction sample count.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker-pool size for sweeps.
    #[arg(long, global = true)]
    pub parallelism: Option<usize>,
    /// Seed for randomized test-domain generation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

impl RunConfig {
    /// Defaults, then the config file (if any), then flag overrides;
    /// validated. All failures here are usage errors.
    pub fn load(overrides: &Overrides) -> Result<Self, String> {
        let mut cfg = RunConfig::default();
        let path = match std::env::var_os(ENV_CONFIG) {
            Some(p) => Some(PathBuf::from(p)),
            None => {
                let p = Path::new(DEFAULT_CONFIG_PATH);
                p.exists().then(|| p.to_path_buf())
            }
        };
        if let Some(p) = path {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            cfg = serde_json::from_str(&text)
                .map_err(|e| format!("config {}: {e}", p.display()))?;
        }
        if let Some(v) = overrides.tol {
            cfg.tol = v;
        }
        if let Some(v) = overrides.trunc_weight {
            cfg.trunc_weight = v;
        }
        if let Some(v) = overrides.samples {
            cfg.samples = v;
        }
        if let Some(v) = overrides.format {
            cfg.format = v;
        }
        if let Some(v) = &overrides.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = overrides.parallelism {
            cfg.parallelism = v;
        }
        if let Some(v) = overrides.seed {
            cfg.seed = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.tol > 1e-14 && self.tol < 1e-2) {
            return Err(format!("tol must lie in (1e-14, 1e-2), got {}", self.tol));
        }
        if !(self.trunc_weight > 0.0 && self.trunc_weight < 1e-3) {
            return Err(format!(
                "trunc-weight must lie in (0, 1e-3), got {}",
                self.trunc_weight
            ));
        }
        if self.samples < 16 {
            return Err(format!("samples must be at least 16, got {}", self.samples));
        }
        if self.parallelism < 1 {
            return Err("parallelism must be at least 1".into());
        }
        Ok(())
    }
}
