//! Run configuration: command-line flags layered over an optional TOML file.

use std::path::{Path, PathBuf};

use ahm_core::metric::GridSpec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Keys accepted in a `--config` file. Spec paths are relative to the file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub spec: Option<PathBuf>,
    #[serde(default)]
    pub specs: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub grid: Option<[usize; 3]>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub amplitude: Option<f64>,
    pub n: Option<String>,
    pub s: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
        cfg.spec = cfg.spec.map(rebase);
        cfg.specs = cfg.specs.into_iter().map(rebase).collect();
        cfg.out = cfg.out.map(rebase);
        Ok(cfg)
    }
}

/// Inclusive dimension range of the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimRange {
    pub first: usize,
    pub last: usize,
}

impl DimRange {
    /// Parses `N`, `A..B` or `A..=B` (both ends inclusive).
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("--n {s:?}: expected N or A..B"));
        let int = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let (first, last) = match s.split_once("..") {
            Some((a, b)) => (int(a)?, int(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = int(s)?;
                (v, v)
            }
        };
        if first < 2 || last < first {
            return Err(CliError::Config(format!("--n {s:?}: need 2 <= A <= B")));
        }
        Ok(Self { first, last })
    }
}

/// `START:STOP:STEP` grid of the sweep variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SRange {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let nums: Option<Vec<f64>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
        match nums.as_deref() {
            Some(&[start, stop, step]) if step > 0.0 && start >= 0.0 && stop > start && stop.is_finite() => {
                Ok(Self { start, stop, step })
            }
            _ => Err(CliError::Config(format!(
                "--s {s:?}: expected START:STOP:STEP with 0 <= START < STOP, STEP > 0"
            ))),
        }
    }
}

pub fn parse_grid(s: &str) -> Result<[usize; 3], CliError> {
    let nums: Option<Vec<usize>> = s.split(',').map(|p| p.trim().parse().ok()).collect();
    match nums.as_deref() {
        Some(&[r, xi, phi]) => Ok([r, xi, phi]),
        _ => Err(CliError::Config(format!("--grid {s:?}: expected R,XI,PHI"))),
    }
}

/// The configuration a run actually used; embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub specs: Vec<PathBuf>,
    pub format: Format,
    /// Where the report goes; not part of the report itself.
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzz: Option<FuzzConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub samples: usize,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepConfig {
    pub n: DimRange,
    pub s: SRange,
}

pub fn check_grid(g: [usize; 3]) -> Result<GridSpec, CliError> {
    if g.iter().any(|&k| k < MIN_NODES) {
        return Err(CliError::Config(format!(
            "grid {g:?}: every node count must be at least {MIN_NODES}"
        )));
    }
    Ok(GridSpec::new(g[0], g[1], g[2]))
}

pub fn check_tol(t: f64) -> Result<f64, CliError> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(CliError::Config(format!("tolerance {t} must be positive and finite")))
    }
}

pub fn check_specs(specs: &[PathBuf]) -> Result<(), CliError> {
    for p in specs {
        if !p.is_file() {
            return Err(CliError::Config(format!("spec file {} not found", p.display())));
        }
    }
    Ok(())
}
