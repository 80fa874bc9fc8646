use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "PATHINT_OUTPUT_DIR";
const FALLBACK_OUTPUT_DIR: &str = "pathint-output";
const DEFAULT_SEED: u64 = 1;

/// One experiment invocation: which experiment, its raw parameters, the seed
/// and where artifacts go.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Config with no parameters, the default seed and the default output
    /// directory.
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            params: BTreeMap::new(),
            seed: DEFAULT_SEED,
            output_dir: default_output_dir(),
        }
    }

    /// Parses flat `key = value` text. Blank lines and lines starting with
    /// `#` or `;` are ignored; `experiment`, `seed` and `output_dir` are
    /// reserved keys, everything else is an experiment parameter.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value, got '{line}'", lineno + 1)))?;
            let key = k.trim();
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", lineno + 1)));
            }
            pairs.push((key.to_string(), v.trim().to_string()));
        }
        Self::from_pairs(None, pairs)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Builds a config from key/value pairs applied in order over `base`.
    pub fn from_pairs(base: Option<Self>, pairs: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let mut experiment = base.as_ref().map(|b| b.experiment.clone());
        let mut cfg = base.unwrap_or_else(|| Self::new(""));
        for (key, value) in pairs {
            match key.replace('-', "_").as_str() {
                "experiment" => experiment = Some(value),
                "seed" => {
                    cfg.seed = value.parse().map_err(|_| CliError::InvalidParam {
                        key,
                        value,
                        expected: "an unsigned 64-bit integer",
                    })?
                }
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                _ => {
                    cfg.params.insert(key, value);
                }
            }
        }
        cfg.experiment = experiment
            .filter(|e| !e.is_empty())
            .ok_or_else(|| CliError::Config("no experiment given".into()))?;
        Ok(cfg)
    }

    /// Applies `--key value` overrides on top of this config.
    pub fn with_overrides(self, pairs: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        Self::from_pairs(Some(self), pairs)
    }
}

fn default_output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(FALLBACK_OUTPUT_DIR))
}

/// Splits `--key value` pairs from a raw argument list.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        let key = flag
            .strip_prefix("--")
            .filter(|k| !k.is_empty())
            .ok_or_else(|| CliError::Config(format!("expected --key, got '{flag}'")))?;
        if let Some((k, v)) = key.split_once('=') {
            out.push((k.to_string(), v.to_string()));
            continue;
        }
        let value = it
            .next()
            .ok_or_else(|| CliError::Config(format!("missing value for --{key}")))?;
        out.push((key.to_string(), value.clone()));
    }
    Ok(out)
}
