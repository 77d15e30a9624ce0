//! Flat `key = value` configuration text with `#` comments.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Invalid(format!("config line {}: expected `key = value`", i + 1)));
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(Error::Invalid(format!("config line {}: empty key", i + 1)));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Invalid(format!("config line {}: duplicate key `{k}`", i + 1)));
            }
        }
        Ok(Config { entries })
    }

    pub fn load(path: &std::path::Path) -> Result<Config> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Numeric value of `key`; a malformed number is an error.
    pub fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::Invalid(format!("config key `{key}`: `{v}` is not a number"))),
        }
    }

    pub fn number_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    /// Looks `key` up under `prefix.` first, then bare.
    pub fn scoped_number(&self, prefix: &str, key: &str) -> Result<Option<f64>> {
        match self.number(&format!("{prefix}.{key}"))? {
            Some(v) => Ok(Some(v)),
            None => self.number(key),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_scopes() {
        let c = Config::parse("# top\nphi = 0.5 # inline\n\ns2.phi=0.25\nsurface = enneper\n").unwrap();
        assert_eq!(c.number("phi").unwrap(), Some(0.5));
        assert_eq!(c.scoped_number("s2", "phi").unwrap(), Some(0.25));
        assert_eq!(c.scoped_number("s3", "phi").unwrap(), Some(0.5));
        assert_eq!(c.get("surface"), Some("enneper"));
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(Config::parse("just words").is_err());
        assert!(Config::parse("= 3").is_err());
        assert!(Config::parse("a = 1\na = 2").is_err());
        assert!(Config::parse("a = x").unwrap().number("a").is_err());
    }
}
