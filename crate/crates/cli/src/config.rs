//! Optional JSON config files: an object whose keys mirror the long flag
//! names; command-line values override config values.

use crate::errors::CliError;
use serde::de::DeserializeOwned;
use serde_json::Value;
use std::path::Path;

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: Option<Value>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self { values: None });
        };
        let text = std::fs::read_to_string(path)?;
        let values: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        if !values.is_object() {
            return Err(CliError::Usage(format!("config {} must be a JSON object", path.display())));
        }
        Ok(Self { values: Some(values) })
    }

    /// CLI value if present, else the config entry under `key`.
    pub fn resolve<T: DeserializeOwned>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if cli.is_some() {
            return Ok(cli);
        }
        let Some(values) = &self.values else {
            return Ok(None);
        };
        match values.get(key) {
            None => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key '{key}': {e}"))),
        }
    }

    /// Parse-from-string variant for flag types with custom syntax (ranges).
    pub fn resolve_parsed<T>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        let raw: Option<String> = self.resolve(None, key)?;
        match raw {
            None => Ok(None),
            Some(s) => s
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key '{key}': {e}"))),
        }
    }

    /// Boolean flags: true if set on the command line or in the config.
    pub fn resolve_flag(&self, cli: bool, key: &str) -> Result<bool, CliError> {
        if cli {
            return Ok(true);
        }
        Ok(self.resolve::<bool>(None, key)?.unwrap_or(false))
    }
}

pub fn required<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required (flag or config file)")))
}
