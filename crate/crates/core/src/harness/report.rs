use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Environment variable overriding the default report directory.
pub const REPORT_DIR_ENV: &str = "RIGIDITYLAB_REPORT_DIR";

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub witness: Option<Value>,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, witness: Option<Value>) -> Self {
        Verdict {
            name: name.into(),
            pass,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub version: String,
    /// Effective parameters, defaults included, so the report can be replayed.
    pub parameters: BTreeMap<String, Value>,
    pub seeds: Vec<u64>,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    /// Writes the report to `path`, or to
    /// `$RIGIDITYLAB_REPORT_DIR/<experiment>[-<unix seconds>].json`
    /// (default directory `./reports`).
    pub fn write(&self, path: Option<&Path>, timestamp: bool) -> std::io::Result<PathBuf> {
        let path = match path {
            Some(p) => p.to_path_buf(),
            None => {
                let dir = std::env::var_os(REPORT_DIR_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("reports"));
                let name = if timestamp {
                    let secs = SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0);
                    format!("{}-{secs}.json", self.experiment)
                } else {
                    format!("{}.json", self.experiment)
                };
                dir.join(name)
            }
        };
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, self.to_json() + "\n")?;
        Ok(path)
    }

    pub fn read(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(std::io::Error::other)
    }
}
