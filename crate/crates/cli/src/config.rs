use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

pub const CACHE_ENV: &str = "MAHOWALD_CACHE_DIR";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Tsv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Threads {
    #[default]
    #[serde(with = "auto")]
    Auto,
    Count(usize),
}

mod auto {
    use serde::{Deserialize, Deserializer};

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "auto" {
            Ok(())
        } else {
            Err(serde::de::Error::custom(format!("expected \"auto\" or a count, got {s:?}")))
        }
    }
}

/// Per-field defaults for `mahowald`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDefaults {
    pub n_max: Option<u32>,
    pub s_margin: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub threads: Threads,
    #[serde(default)]
    pub format: Format,
    /// Keyed by field name: `R`, `C` or `H`.
    #[serde(default)]
    pub fields: BTreeMap<String, FieldDefaults>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let c: Config = toml::from_str(text).map_err(|e| e.to_string())?;
        if c.threads == Threads::Count(0) {
            return Err("threads must be at least 1".into());
        }
        for k in c.fields.keys() {
            if !matches!(k.as_str(), "R" | "C" | "H") {
                return Err(format!("unknown field {k:?} in [fields]"));
            }
        }
        Ok(c)
    }

    /// Flag, then environment, then config file.
    pub fn cache_dir(&self, flag: Option<&Path>, env: Option<&str>) -> Option<PathBuf> {
        flag.map(Path::to_path_buf)
            .or_else(|| env.filter(|s| !s.is_empty()).map(PathBuf::from))
            .or_else(|| self.cache_dir.clone())
    }

    pub fn thread_count(&self, flag: Option<usize>) -> usize {
        match (flag, self.threads) {
            (Some(n), _) | (None, Threads::Count(n)) => n.max(1),
            (None, Threads::Auto) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}
