//! Configuration files in TOML (default) or JSON (`.json` extension).
//!
//! ```toml
//! n_modes = 1
//! period = 6.283185307179586
//! steps_per_period = 4096
//!
//! [k_qq]
//! constant = [[1.0]]
//! harmonics = [{ harmonic = 1, cos = [[-0.1]], sin = [[0.0]] }]
//!
//! [k_pp]
//! constant = [[1.0]]
//! ```
//!
//! `k_qp` may be omitted and defaults to zero. A harmonic may omit `cos` or
//! `sin`, which then default to zero.

use std::path::Path;

use floquet_pacs_core::linalg::RMat;
use floquet_pacs_core::model::{FourierMatrix, SBlocks, DEFAULT_STEPS_PER_PERIOD};
use floquet_pacs_core::PeriodicConfiguration;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigFormat {
    Toml,
    Json,
}

impl ConfigFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ConfigFormat::Json,
            _ => ConfigFormat::Toml,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicEntry {
    pub harmonic: u32,
    #[serde(default)]
    pub cos: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub sin: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockEntry {
    pub constant: Vec<Vec<f64>>,
    #[serde(default)]
    pub harmonics: Vec<HarmonicEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n_modes: usize,
    pub period: f64,
    #[serde(default)]
    pub steps_per_period: Option<usize>,
    pub k_qq: BlockEntry,
    pub k_pp: BlockEntry,
    #[serde(default)]
    pub k_qp: Option<BlockEntry>,
}

fn matrix(rows: &[Vec<f64>], n: usize, field: &str) -> Result<RMat, String> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(format!("{field} must be a {n}x{n} matrix"));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(format!("{field} holds a non-finite entry"));
    }
    Ok(RMat::from_fn(n, n, |i, j| rows[i][j]))
}

fn block(entry: &BlockEntry, n: usize, name: &str) -> Result<FourierMatrix, String> {
    let mut out = FourierMatrix::constant(matrix(&entry.constant, n, &format!("{name}.constant"))?);
    for (k, h) in entry.harmonics.iter().enumerate() {
        if h.harmonic == 0 {
            return Err(format!("{name}.harmonics[{k}].harmonic must be at least 1"));
        }
        let part = |m: &Option<Vec<Vec<f64>>>, which: &str| match m {
            Some(rows) => matrix(rows, n, &format!("{name}.harmonics[{k}].{which}")),
            None => Ok(RMat::zeros(n, n)),
        };
        out = out.with_harmonic(h.harmonic, part(&h.cos, "cos")?, part(&h.sin, "sin")?);
    }
    Ok(out)
}

impl ConfigFile {
    pub fn parse(text: &str, format: ConfigFormat) -> Result<Self, String> {
        match format {
            ConfigFormat::Toml => toml::from_str(text).map_err(|e| e.message().to_string()),
            ConfigFormat::Json => serde_json::from_str(text).map_err(|e| e.to_string()),
        }
    }

    pub fn to_configuration(&self) -> Result<PeriodicConfiguration, String> {
        let n = self.n_modes;
        if n == 0 {
            return Err("n_modes must be at least 1".into());
        }
        let blocks = SBlocks {
            k_qq: block(&self.k_qq, n, "k_qq")?,
            k_pp: block(&self.k_pp, n, "k_pp")?,
            k_qp: match &self.k_qp {
                Some(entry) => block(entry, n, "k_qp")?,
                None => FourierMatrix::zeros(n),
            },
        };
        let steps = self.steps_per_period.unwrap_or(DEFAULT_STEPS_PER_PERIOD);
        PeriodicConfiguration::new(n, self.period, blocks, steps).map_err(|e| e.to_string())
    }
}

pub fn load_configuration(path: &Path) -> CliResult<PeriodicConfiguration> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let invalid = |message: String| CliError::Config {
        path: path.to_path_buf(),
        message,
    };
    ConfigFile::parse(&text, ConfigFormat::from_path(path))
        .map_err(invalid)?
        .to_configuration()
        .map_err(invalid)
}
