//! Flat TOML experiment configs.

use std::path::{Path, PathBuf};

use bohr_core::rational::parse_rational;
use bohr_core::{build_params, AlphaVector, BohrThreshold, ChessboardParams, ParamRequest, Rational};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Environment variable that overrides `seed` and nothing else.
pub const SEED_ENV: &str = "BOHR_SEED";

/// One experiment. Chessboard keys first, then per-command knobs; a command
/// only reads the keys it needs and reports the first missing one by name.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphas: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(rename = "N0", skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(rename = "N2", skip_serializing_if = "Option::is_none")]
    pub n2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lcm_bound: Option<u64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx_note: Option<String>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_lo: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_hi: Option<i64>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_lo: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_hi: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parallel: Option<bool>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<u64>,

    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub resolution: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census_mode: Option<String>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub hj_d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_budget: Option<u64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// A parsed config together with the bytes it came from.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub sha256: String,
}

impl LoadedConfig {
    pub fn from_text(text: &str) -> Result<LoadedConfig, CliError> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        Ok(LoadedConfig {
            config,
            sha256: sha256_hex(text.as_bytes()),
        })
    }

    pub fn from_path(path: &Path) -> Result<LoadedConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        LoadedConfig::from_text(&text)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn missing(key: &str) -> CliError {
    CliError::Config(format!("missing key `{key}`"))
}

fn invalid(key: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("invalid value for key `{key}`: {reason}"))
}

pub(crate) fn need<T: Clone>(value: &Option<T>, key: &str) -> Result<T, CliError> {
    value.clone().ok_or_else(|| missing(key))
}

pub(crate) fn rational_key(value: &Option<String>, key: &str) -> Result<Rational, CliError> {
    let text = need(value, key)?;
    parse_rational(&text).map_err(|e| invalid(key, e))
}

impl ExperimentConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    /// Replaces `seed` by the value of [`SEED_ENV`], if given.
    pub fn apply_seed_override(&mut self, env_value: Option<&str>) -> Result<(), CliError> {
        if let Some(raw) = env_value {
            let seed = raw
                .trim()
                .parse::<u64>()
                .map_err(|e| CliError::Config(format!("invalid value for {SEED_ENV}: {e}")))?;
            self.seed = Some(seed);
        }
        Ok(())
    }

    pub fn alpha_vector(&self) -> Result<AlphaVector, CliError> {
        let text = need(&self.alphas, "alphas")?;
        let alphas = AlphaVector::parse(&text).map_err(|e| invalid("alphas", e))?;
        Ok(alphas.with_notes(
            self.label.clone().unwrap_or_default(),
            self.approx_note.clone().unwrap_or_default(),
        ))
    }

    pub fn delta_value(&self) -> Result<BohrThreshold, CliError> {
        let delta = rational_key(&self.delta, "delta")?;
        BohrThreshold::new(delta).map_err(|e| invalid("delta", e))
    }

    pub fn params(&self) -> Result<ChessboardParams, CliError> {
        let dim = need(&self.d, "d")?;
        let alphas = self.alpha_vector()?;
        let delta = self.delta_value()?;
        let req = ParamRequest {
            dim,
            alphas,
            delta,
            cell_side: need(&self.n0, "N0")?,
            subdivision: need(&self.c, "C")?,
            cells_per_axis: need(&self.k, "k")?,
            horizon: need(&self.n2, "N2")?,
            seed: need(&self.seed, "seed")?,
            lcm_bound: self.lcm_bound.unwrap_or(1),
        };
        Ok(build_params(req)?)
    }
}
