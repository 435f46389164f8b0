//! Run configuration, read from a TOML file.

use std::path::{Path, PathBuf};

use fermi_eos_core::exponents::{parse_rational, Q};
use fermi_eos_core::scattering::RadialPotential;
use fermi_eos_core::Dimension;
use serde::Deserialize;

use crate::CliError;

/// Built-in configuration used when `--config` is not given.
pub const DEFAULT_CONFIG: &str = include_str!("../../../configs/default.toml");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_dimension")]
    pub dimension: u8,
    pub potential: Option<PotentialConfig>,
    pub thermo: Option<ThermoConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub exponents: ExponentsConfig,
    /// Directory of the config file; relative paths are resolved against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_dimension() -> u8 {
    3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialConfig {
    SquareBarrier {
        v0: f64,
        r: f64,
        tol: Option<f64>,
    },
    Shell {
        v0: f64,
        r_inner: f64,
        r_outer: f64,
        tol: Option<f64>,
    },
    Tabulated {
        file: PathBuf,
        tol: Option<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermoConfig {
    pub beta: Vec<f64>,
    pub mu: Option<Vec<f64>>,
    pub z: Option<Vec<f64>>,
    /// Scattering lengths; taken from `[potential]` when absent.
    pub a: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: default_dir(), formats: default_formats() }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<String> {
    vec!["csv".into(), "json".into(), "svg".into()]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "one")]
    pub tolerance_scale: f64,
    pub only: Option<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { tolerance_scale: 1.0, only: None }
    }
}

fn one() -> f64 {
    1.0
}

/// Rationals are written as strings (`"1/8"`) or integers.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    pub fn parse(&self) -> Result<Q, CliError> {
        match self {
            RationalText::Int(n) => Ok(Q::from_integer((*n).into())),
            RationalText::Text(t) => parse_rational(t).map_err(CliError::from),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentsConfig {
    pub dimension: Option<u8>,
    pub alpha: Option<RationalText>,
    pub alpha_grid: Option<Vec<RationalText>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

pub fn parse_formats(items: &[String]) -> Result<Vec<Format>, CliError> {
    let mut out = Vec::new();
    for item in items.iter().flat_map(|s| s.split(',')) {
        let f = match item.trim().to_ascii_lowercase().as_str() {
            "csv" => Format::Csv,
            "json" => Format::Json,
            "svg" => Format::Svg,
            other => return Err(CliError::Validation(format!("unknown output format '{other}' (use csv, json, svg)"))),
        };
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err(CliError::Validation("at least one output format is required".into()));
    }
    Ok(out)
}

impl RunConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self, CliError> {
        let mut cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Validation(format!("config: {}", e.message())))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.dim()?;
        if !(cfg.verify.tolerance_scale.is_finite() && cfg.verify.tolerance_scale >= 0.0) {
            return Err(CliError::Validation("verify.tolerance_scale must be non-negative".into()));
        }
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Self::from_toml(DEFAULT_CONFIG, Path::new(".")),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", p.display())))?;
                let base = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
                Self::from_toml(&text, base)
            }
        }
    }

    pub fn dim(&self) -> Result<Dimension, CliError> {
        Dimension::try_from(self.dimension).map_err(CliError::from)
    }

    pub fn build_potential(&self) -> Result<(RadialPotential, Option<f64>), CliError> {
        let dim = self.dim()?;
        let Some(p) = &self.potential else {
            return Err(CliError::Validation("config has no [potential] section".into()));
        };
        let (pot, tol) = match p {
            PotentialConfig::SquareBarrier { v0, r, tol } => (RadialPotential::square_barrier(*v0, *r, dim)?, *tol),
            PotentialConfig::Shell { v0, r_inner, r_outer, tol } => {
                (RadialPotential::shell(*v0, *r_inner, *r_outer, dim)?, *tol)
            }
            PotentialConfig::Tabulated { file, tol } => {
                let path = self.base_dir.join(file);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Validation(format!("cannot read potential table {}: {e}", path.display())))?;
                (RadialPotential::from_csv_str(&text, dim)?, *tol)
            }
        };
        Ok((pot, tol))
    }
}
