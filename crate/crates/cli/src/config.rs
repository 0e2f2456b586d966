//! Flag resolution with config-file fallback.
//!
//! Every command resolves its options through a [`Resolver`]: a value given
//! on the command line wins, else the config file (flat `key=value` lines,
//! keys mirroring long flag names), else the built-in default. Whatever the
//! resolution produced is echoed into the run manifest so a run can be
//! reproduced from the manifest alone.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use anyhow::Result;

use crate::usage;

pub struct Resolver {
    file: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(config: Option<&Path>) -> Result<Self> {
        let mut file = BTreeMap::new();
        if let Some(path) = config {
            if !path.exists() {
                return Err(usage(format!("config file not found: {}", path.display())));
            }
            let text = fs::read_to_string(path)?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(usage(format!(
                        "config line {} is not key=value: {line:?}",
                        lineno + 1
                    )));
                };
                file.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Resolver {
            file,
            resolved: BTreeMap::new(),
        })
    }

    fn parse<T: FromStr>(key: &str, raw: &str) -> Result<T> {
        raw.parse()
            .map_err(|_| usage(format!("invalid value for {key}: {raw:?}")))
    }

    /// Flag value, else config value, else the default.
    pub fn value<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        let value = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(raw) => Self::parse(key, raw)?,
                None => default,
            },
        };
        self.resolved.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// Flag value, else config value, else absent. Absent keys are not
    /// echoed into the manifest.
    pub fn optional<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(raw) => Some(Self::parse(key, raw)?),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.resolved.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    /// Like [`Resolver::optional`] but required: absence is a usage error.
    pub fn required<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<T> {
        self.optional(key, flag)?
            .ok_or_else(|| usage(format!("missing required option --{key}")))
    }

    /// Comma-separated list of unsigned integers.
    pub fn usize_list(&mut self, key: &str, flag: Option<String>, default: &str) -> Result<Vec<usize>> {
        let raw = self.value(key, flag, default.to_string())?;
        let items: Vec<usize> = raw
            .split(',')
            .map(|part| Self::parse(key, part.trim()))
            .collect::<Result<_>>()?;
        if items.is_empty() {
            return Err(usage(format!("empty list for {key}")));
        }
        Ok(items)
    }

    /// Comma-separated list of names (lowercased, deduplicated in order).
    pub fn name_list(&mut self, key: &str, flag: Option<String>, default: &str) -> Result<Vec<String>> {
        let raw = self.value(key, flag, default.to_string())?;
        let mut items = Vec::new();
        for part in raw.split(',') {
            let name = part.trim().to_ascii_lowercase();
            if name.is_empty() {
                return Err(usage(format!("empty entry in {key} list")));
            }
            if !items.contains(&name) {
                items.push(name);
            }
        }
        Ok(items)
    }

    /// The fully resolved configuration for the manifest.
    pub fn into_resolved(self) -> BTreeMap<String, String> {
        self.resolved
    }
}
