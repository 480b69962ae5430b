//! Parameter resolution with the precedence
//! command-line flag > `ZX_`-prefixed environment variable > config file.
//!
//! The config file is plain `key = value` text keyed by the long flag names
//! (without the leading dashes); `#` starts a comment. Keys the invoked
//! subcommand does not understand are rejected.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

pub struct Resolver {
    config: BTreeMap<String, String>,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl Resolver {
    pub fn new(config_path: Option<&Path>, allowed_keys: &[&str]) -> Result<Self, UsageError> {
        let mut config = BTreeMap::new();
        if let Some(path) = config_path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    UsageError(format!(
                        "config {} line {}: expected key=value",
                        path.display(),
                        lineno + 1
                    ))
                })?;
                let key = key.trim().to_string();
                if !allowed_keys.contains(&key.as_str()) {
                    return Err(UsageError(format!(
                        "config {} line {}: unknown key '{key}'",
                        path.display(),
                        lineno + 1
                    )));
                }
                config.insert(key, value.trim().to_string());
            }
        }
        Ok(Self { config })
    }

    /// Resolves one parameter; `key` is the long flag name (kebab-case).
    pub fn get<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, UsageError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        let env_key = format!("ZX_{}", key.replace('-', "_").to_uppercase());
        if let Ok(raw) = std::env::var(&env_key) {
            return raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| UsageError(format!("{env_key}={raw}: {e}")));
        }
        if let Some(raw) = self.config.get(key) {
            return raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| UsageError(format!("config {key}={raw}: {e}")));
        }
        Ok(None)
    }

    /// Resolves a required parameter.
    pub fn require<T>(&self, flag: Option<T>, key: &str) -> Result<T, UsageError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(flag, key)?
            .ok_or_else(|| UsageError(format!("missing required parameter --{key}")))
    }
}
