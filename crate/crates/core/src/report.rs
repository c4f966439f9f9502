//! JSON envelope and file helpers shared by every report.
//!
//! Reports are deterministic: keys follow struct declaration order, floats
//! use the shortest round-trip form and nothing time-dependent is written.
//! Wall-clock metadata goes to a separate file via [`write_metadata`].

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::{SCHEMA, TOOL_VERSION};

#[derive(Debug, Clone, Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: &'a str,
    pub config: &'a C,
    pub seed: Option<u64>,
    pub result: &'a R,
}

impl<'a, C: Serialize, R: Serialize> Envelope<'a, C, R> {
    pub fn new(command: &'a str, config: &'a C, seed: Option<u64>, result: &'a R) -> Self {
        Self {
            schema: SCHEMA,
            tool_version: TOOL_VERSION,
            command,
            config,
            seed,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
        s.push('\n');
        Ok(s)
    }
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: PathBuf::from(dir),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| Error::Io {
        path: PathBuf::from(path),
        source,
    })
}

#[derive(Debug, Clone, Serialize)]
struct Metadata<'a> {
    schema: &'static str,
    tool_version: &'static str,
    command: &'a str,
    created_unix_seconds: u64,
    parallel: bool,
}

/// `<command>.metadata.json` next to the reports: the only file holding a timestamp.
pub fn write_metadata(dir: impl AsRef<Path>, command: &str) -> Result<()> {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let m = Metadata {
        schema: SCHEMA,
        tool_version: TOOL_VERSION,
        command,
        created_unix_seconds: secs,
        parallel: crate::par::is_parallel(),
    };
    let text = serde_json::to_string_pretty(&m).map_err(|e| Error::Domain(e.to_string()))?;
    write_file(dir.as_ref().join(format!("{command}.metadata.json")), &(text + "\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_fields() {
        let cfg = serde_json::json!({"p": 2.0});
        let res = serde_json::json!({"k_lower": 1.0});
        let s = Envelope::new("kreiss", &cfg, Some(7), &res).to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["schema"], "kreisslab/1");
        assert_eq!(v["seed"], 7);
        assert_eq!(v["config"]["p"], 2.0);
        assert_eq!(s, Envelope::new("kreiss", &cfg, Some(7), &res).to_json().unwrap());
    }
}
