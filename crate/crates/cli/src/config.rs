//! Run configuration: an optional TOML file overlaid by command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

use clap::ValueEnum;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Keys accepted in the config file. Every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    quadrature_order: Option<usize>,
    output_format: Option<Format>,
    seed: Option<u64>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub quadrature_order: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub output_format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            quadrature_order: 64,
            tolerances: BTreeMap::new(),
            output_format: Format::Csv,
            seed: 0,
        }
    }
}

/// Values given on the command line; `None` leaves the file or default value.
#[derive(Debug, Default)]
pub struct Overrides {
    pub quadrature_order: Option<usize>,
    pub output_format: Option<Format>,
    pub seed: Option<u64>,
    pub tolerances: Vec<(String, f64)>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, flags: Overrides) -> Result<Self, CliError> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| CliError::Usage(format!("bad config {}: {e}", p.display())))?
            }
            None => FileConfig::default(),
        };
        let defaults = Self::default();
        let mut tolerances = file.tolerances;
        tolerances.extend(flags.tolerances);
        let cfg = Self {
            quadrature_order: flags
                .quadrature_order
                .or(file.quadrature_order)
                .unwrap_or(defaults.quadrature_order),
            output_format: flags
                .output_format
                .or(file.output_format)
                .unwrap_or(defaults.output_format),
            seed: flags.seed.or(file.seed).unwrap_or(defaults.seed),
            tolerances,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.quadrature_order < 4 {
            return Err(CliError::Usage(format!(
                "quadrature order {} is below 4",
                self.quadrature_order
            )));
        }
        if let Some((k, v)) = self.tolerances.iter().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(CliError::Usage(format!("tolerance {k} = {v} must be positive")));
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

/// Parses `name=value` for `--tol`.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|e| format!("bad tolerance value {v:?}: {e}"))?;
    Ok((k.trim().to_string(), v))
}
