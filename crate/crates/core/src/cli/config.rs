//! `key = value` configuration files.
//!
//! Recognised keys: `tol` (real), `cache` (bool), `pretty` (bool),
//! `deterministic` (bool). Blank lines and lines starting with `#` are
//! ignored. Command-line flags take precedence.

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub tol: f64,
    pub cache: bool,
    pub pretty: bool,
    pub deterministic: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            cache: true,
            pretty: false,
            deterministic: false,
        }
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Parse(format!("{key}: expected a boolean, got {v:?}"))),
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "tol" => {
                    cfg.tol = v
                        .parse()
                        .ok()
                        .filter(|t: &f64| *t > 0.0)
                        .ok_or_else(|| Error::Parse(format!("tol: expected a positive real, got {v:?}")))?
                }
                "cache" => cfg.cache = parse_bool(k, v)?,
                "pretty" => cfg.pretty = parse_bool(k, v)?,
                "deterministic" => cfg.deterministic = parse_bool(k, v)?,
                _ => return Err(Error::Parse(format!("config line {}: unknown key {k:?}", lineno + 1))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
