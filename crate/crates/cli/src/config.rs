//! `key=value` config files merged under command-line flags, and the resolved
//! config hash embedded in every output.

use std::collections::BTreeMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::CliError;

/// Resolved settings: flag values override file values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value, got {raw:?}", n + 1)))?;
            let key = k.trim().trim_start_matches("--").to_string();
            if key.is_empty() {
                return Err(CliError::Usage(format!("config line {}: empty key", n + 1)));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Settings { values })
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Settings::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                Settings::parse(&text)
            }
        }
    }

    /// A flag value if given, else the file value.
    pub fn set_flag(&mut self, key: &str, flag: Option<String>) {
        if let Some(v) = flag {
            self.values.insert(key.to_string(), v);
        }
    }

    pub fn take(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn insert_default(&mut self, key: &str, value: impl ToString) {
        self.values.entry(key.to_string()).or_insert_with(|| value.to_string());
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::Usage(format!("--{key} {v:?}: {e}"))))
            .transpose()
    }

    /// Comma-separated list.
    pub fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().parse::<T>().map_err(|e| CliError::Usage(format!("--{key} {s:?}: {e}"))))
                    .collect()
            })
            .transpose()
    }

    pub fn as_map(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// SHA-256 over sorted `key=value\n` lines.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in &self.values {
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }
}

/// Parses `re,im`.
pub fn parse_pair(s: &str) -> Result<[f64; 2], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => {
            let p = |x: &str| x.parse::<f64>().map_err(|e| CliError::Usage(format!("{x:?} in {s:?}: {e}")));
            Ok([p(a)?, p(b)?])
        }
        _ => Err(CliError::Usage(format!("expected re,im, got {s:?}"))),
    }
}
