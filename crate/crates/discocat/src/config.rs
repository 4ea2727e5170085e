//! Runtime configuration: defaults, `key=value` config files, and the
//! precedence rule that command-line flags override file values.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::cluster::ClusterConfig;
use crate::corpus::default_stop_set;
use crate::formats::read_key_values;
use crate::space::SpaceConfig;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown configuration key `{key}`")]
    UnknownKey { key: String },
    #[error("key `{key}`: `{value}` is not a valid {expected}")]
    BadValue { key: String, value: String, expected: &'static str },
    #[error(transparent)]
    Format(#[from] crate::formats::FormatError),
}

/// Composition mode selected on the command line or in a config file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    Pure,
    #[default]
    Density,
    DensityFrobenius,
    Noncommutative,
}

impl Mode {
    pub fn parse(text: &str) -> Option<Mode> {
        match text {
            "pure" => Some(Mode::Pure),
            "density" => Some(Mode::Density),
            "density-frobenius" => Some(Mode::DensityFrobenius),
            "noncommutative" => Some(Mode::Noncommutative),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Pure => "pure",
            Mode::Density => "density",
            Mode::DensityFrobenius => "density-frobenius",
            Mode::Noncommutative => "noncommutative",
        }
    }
}

/// Every tunable the tools accept, with its default.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub window: usize,
    pub basis_size: usize,
    pub tau: f64,
    pub min_clusters: usize,
    pub min_cluster_size: usize,
    pub top_k: usize,
    pub stop_list: Option<PathBuf>,
    pub mode: Mode,
    /// Dimension overrides per basic type, e.g. `dim_n = 4`.
    pub dims: BTreeMap<String, usize>,
    pub psd_tolerance: f64,
    pub trace_tolerance: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            window: 5,
            basis_size: 2000,
            tau: 0.8,
            min_clusters: 1,
            min_cluster_size: 5,
            top_k: 100,
            stop_list: None,
            mode: Mode::Density,
            dims: BTreeMap::new(),
            psd_tolerance: 1e-9,
            trace_tolerance: 1e-9,
        }
    }
}

fn parse_num<T: std::str::FromStr>(
    key: &str,
    value: &str,
    expected: &'static str,
) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        expected,
    })
}

impl Config {
    /// Applies `key=value` pairs on top of `self`. Unknown keys are errors
    /// so typos do not silently fall back to defaults.
    pub fn apply(&mut self, pairs: &BTreeMap<String, String>) -> Result<(), ConfigError> {
        for (key, value) in pairs {
            match key.as_str() {
                "window" => self.window = parse_num(key, value, "count")?,
                "basis_size" => self.basis_size = parse_num(key, value, "count")?,
                "tau" => self.tau = parse_num(key, value, "number")?,
                "min_clusters" => self.min_clusters = parse_num(key, value, "count")?,
                "min_cluster_size" => self.min_cluster_size = parse_num(key, value, "count")?,
                "top_k" => self.top_k = parse_num(key, value, "count")?,
                "stop_list" => self.stop_list = Some(PathBuf::from(value)),
                "mode" => {
                    self.mode = Mode::parse(value).ok_or_else(|| ConfigError::BadValue {
                        key: key.clone(),
                        value: value.clone(),
                        expected: "mode (pure, density, density-frobenius, noncommutative)",
                    })?
                }
                "psd_tolerance" => self.psd_tolerance = parse_num(key, value, "number")?,
                "trace_tolerance" => self.trace_tolerance = parse_num(key, value, "number")?,
                _ => {
                    if let Some(basic) = key.strip_prefix("dim_") {
                        let d: usize = parse_num(key, value, "dimension")?;
                        self.dims.insert(basic.to_string(), d);
                    } else {
                        return Err(ConfigError::UnknownKey { key: key.clone() });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut config = Config::default();
        config.apply(&read_key_values(text)?)?;
        Ok(config)
    }

    /// The pipeline settings, with the stop list resolved relative to
    /// `base` (the config file's directory, or the working directory).
    pub fn space_config(&self, base: &Path) -> std::io::Result<SpaceConfig> {
        let stop = match &self.stop_list {
            Some(path) => {
                let full = if path.is_absolute() { path.clone() } else { base.join(path) };
                crate::corpus::parse_stop_list(&std::fs::read_to_string(full)?)
            }
            None => default_stop_set(),
        };
        Ok(SpaceConfig { window: self.window, basis_size: self.basis_size, stop })
    }

    pub fn cluster_config(&self) -> ClusterConfig {
        ClusterConfig {
            tau: self.tau,
            min_clusters: self.min_clusters,
            min_size: self.min_cluster_size,
        }
    }

    /// Dimension of a basic type, if configured.
    pub fn dim_of(&self, basic: &str) -> Option<usize> {
        self.dims.get(basic).copied()
    }
}
