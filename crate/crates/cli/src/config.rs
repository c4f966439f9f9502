//! Config file loading and flag precedence.
//!
//! Layout: top-level `seed`, `threads`, `out`; shared tables `[operator]`
//! and `[search]`; one table per subcommand (`[kreiss]`, `[growth]`, ...).
//! Any other key is rejected. Values set on the command line win.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::UsageError;

const TOP_LEVEL: &[&str] = &["seed", "threads", "out", "operator", "search"];

pub const SUBCOMMANDS: &[&str] = &[
    "kreiss",
    "strong-kreiss",
    "exp-criterion",
    "cesaro",
    "growth",
    "bounds",
    "decomp-scan",
    "riesz-norm",
    "marcinkiewicz",
    "type-cotype",
    "positivity",
    "verify-appendix",
    "gallery-list",
    "plot",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    table: Map<String, Value>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let table: toml::Table =
            toml::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        let value = serde_json::to_value(table)?;
        let Value::Object(table) = value else {
            unreachable!("a TOML document is a table")
        };
        for key in table.keys() {
            if !TOP_LEVEL.contains(&key.as_str()) && !SUBCOMMANDS.contains(&key.as_str()) {
                return Err(UsageError(format!("{}: unknown key `{key}`", path.display())).into());
            }
        }
        Ok(Self { table })
    }

    fn top<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| UsageError(format!("config key `{key}`: {e}")).into()),
        }
    }

    pub fn seed(&self) -> Result<Option<u64>> {
        self.top("seed")
    }

    pub fn threads(&self) -> Result<Option<usize>> {
        self.top("threads")
    }

    pub fn out(&self) -> Result<Option<PathBuf>> {
        self.top("out")
    }

    /// Table `section` overlaid with the non-null fields of `flags`,
    /// deserialized into the resolved config `C` (which rejects unknown keys
    /// and fills defaults).
    pub fn resolve<A: Serialize, C: DeserializeOwned>(&self, section: &str, flags: &A) -> Result<C> {
        let mut merged = match self.table.get(section) {
            None => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err(UsageError(format!("config key `{section}` must be a table")).into()),
        };
        if let Value::Object(f) = serde_json::to_value(flags)? {
            for (k, v) in f {
                if !v.is_null() {
                    merged.insert(k, v);
                }
            }
        }
        serde_json::from_value(Value::Object(merged)).map_err(|e| UsageError(format!("[{section}]: {e}")).into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{GrowthArgs, GrowthConfig, OperatorArgs, PValue};

    fn load(text: &str) -> Result<FileConfig> {
        let dir = tempfile::tempdir()?;
        let path = dir.path().join("c.toml");
        fs::write(&path, text)?;
        FileConfig::load(&path)
    }

    fn growth_flags() -> GrowthArgs {
        GrowthArgs {
            operator: OperatorArgs::default(),
            p: None,
            n_max: Some(64),
            fit: None,
            restarts: None,
        }
    }

    #[test]
    fn flags_override_file_and_defaults_fill_gaps() {
        let file = load("seed = 3\n[growth]\np = \"inf\"\nn_max = 10\n").unwrap();
        let c: GrowthConfig = file.resolve("growth", &growth_flags()).unwrap();
        assert_eq!(c.p, PValue(f64::INFINITY));
        assert_eq!(c.n_max, 64);
        assert_eq!(c.restarts, 32);
        assert_eq!(file.seed().unwrap(), Some(3));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(load("sed = 3\n").is_err());
        let file = load("[growth]\nn_mux = 10\n").unwrap();
        let r: Result<GrowthConfig> = file.resolve("growth", &growth_flags());
        assert!(r.unwrap_err().downcast_ref::<UsageError>().is_some());
    }
}
