//! Run manifests: every file-producing invocation writes a
//! `<output>.manifest.json` next to its primary output recording the
//! resolved parameters, seeds, tool version, produced files, and wall time.

use crate::errors::CliError;
use serde::Serialize;
use std::path::{Path, PathBuf};

pub const MANIFEST_SCHEMA: &str = "phasetrans/manifest/v1";

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub subcommand: String,
    pub parameters: serde_json::Value,
    pub seeds: Vec<u64>,
    pub tool_version: &'static str,
    pub outputs: Vec<String>,
    pub wall_time_secs: f64,
}

impl RunManifest {
    pub fn new(subcommand: &str, parameters: serde_json::Value, seeds: Vec<u64>) -> Self {
        Self {
            schema: MANIFEST_SCHEMA,
            subcommand: subcommand.to_string(),
            parameters,
            seeds,
            tool_version: env!("CARGO_PKG_VERSION"),
            outputs: Vec::new(),
            wall_time_secs: 0.0,
        }
    }

    pub fn manifest_path(primary_output: &Path) -> PathBuf {
        let mut name = primary_output.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        primary_output.with_file_name(name)
    }

    pub fn write(&self, primary_output: &Path) -> Result<PathBuf, CliError> {
        let path = Self::manifest_path(primary_output);
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("manifest serialization: {e}")))?;
        std::fs::write(&path, text + "\n")?;
        Ok(path)
    }
}
