//! Flat `key = value` configuration with layered sources.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! line    := blank | comment | entry
//! comment := '#' any*
//! entry   := key ws* '=' ws* value ws* ('#' any*)?
//! key     := [a-z0-9_.]+
//! value   := any non-empty text up to an unquoted '#'
//! ```
//!
//! Environment variables `CAVITYSENSE_<KEY>` supply the lowest layer, with `__`
//! standing for `.` (`CAVITYSENSE_GRID__START` sets `grid.start`). A file
//! overrides the environment and `--set key=value` flags override the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

pub const ENV_PREFIX: &str = "CAVITYSENSE_";

/// Where an entry came from, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    File { name: String, line: usize, col: usize },
    Env(String),
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::File { name, line, col } => write!(f, "{name}:{line}:{col}"),
            Origin::Env(var) => write!(f, "environment variable {var}"),
            Origin::Flag => write!(f, "command-line flag"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    pub origin: Origin,
}

/// A configuration problem tied to its source location.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{origin}: {message}")]
pub struct ConfigError {
    pub origin: Origin,
    pub message: String,
}

impl ConfigError {
    pub fn at(origin: &Origin, message: impl Into<String>) -> Self {
        Self { origin: origin.clone(), message: message.into() }
    }

    /// An error not tied to any single entry.
    pub fn global(message: impl Into<String>) -> Self {
        Self { origin: Origin::Flag, message: message.into() }
    }
}

/// Merged key-value entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

fn valid_key(key: &str) -> bool {
    !key.is_empty() && key.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_' || b == b'.')
}

impl RawConfig {
    pub fn parse(text: &str, name: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let body = line.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let key_col = body.len() - body.trim_start().len() + 1;
            let loc = |col| Origin::File { name: name.to_string(), line: lineno, col };
            let Some(eq) = body.find('=') else {
                return Err(ConfigError::at(&loc(key_col), "expected `key = value`"));
            };
            let key = body[..eq].trim();
            if !valid_key(key) {
                return Err(ConfigError::at(&loc(key_col), format!("invalid key `{key}`")));
            }
            let rest = &body[eq + 1..];
            let value = rest.trim();
            let value_col = eq + 2 + (rest.len() - rest.trim_start().len());
            if value.is_empty() {
                return Err(ConfigError::at(&loc(value_col), format!("missing value for `{key}`")));
            }
            if let Some(prev) = cfg.entries.get(key) {
                return Err(ConfigError::at(&loc(key_col), format!("duplicate key `{key}` (first set at {})", prev.origin)));
            }
            cfg.entries.insert(key.to_string(), Entry { value: value.to_string(), origin: loc(value_col) });
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::global(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Entries from `CAVITYSENSE_*` variables in `vars`.
    pub fn from_env<I: IntoIterator<Item = (String, String)>>(vars: I) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (var, value) in vars {
            let Some(rest) = var.strip_prefix(ENV_PREFIX) else { continue };
            let key = rest.to_ascii_lowercase().replace("__", ".");
            let origin = Origin::Env(var.clone());
            if !valid_key(&key) {
                return Err(ConfigError::at(&origin, format!("invalid key `{key}`")));
            }
            cfg.entries.insert(key, Entry { value: value.trim().to_string(), origin });
        }
        Ok(cfg)
    }

    /// Entries from `key=value` flag arguments.
    pub fn from_flags(flags: &[String]) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for f in flags {
            let Some((k, v)) = f.split_once('=') else {
                return Err(ConfigError::global(format!("flag `{f}` is not of the form key=value")));
            };
            let key = k.trim();
            if !valid_key(key) || v.trim().is_empty() {
                return Err(ConfigError::global(format!("flag `{f}` is not of the form key=value")));
            }
            cfg.entries.insert(key.to_string(), Entry { value: v.trim().to_string(), origin: Origin::Flag });
        }
        Ok(cfg)
    }

    /// Entries of `over` replace those of `self`.
    pub fn overlay(mut self, over: RawConfig) -> Self {
        self.entries.extend(over.entries);
        self
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(key.to_string(), Entry { value: value.to_string(), origin: Origin::Flag });
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Sorted `key = value` lines, independent of where entries came from.
    pub fn canonical(&self, exclude: &[&str]) -> String {
        let mut s = String::new();
        for (k, e) in &self.entries {
            if !exclude.contains(&k.as_str()) {
                s.push_str(k);
                s.push_str(" = ");
                s.push_str(&e.value);
                s.push('\n');
            }
        }
        s
    }
}

/// Unit families accepted after a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    None,
    Time,
    Rate,
}

/// Parses `<number> [suffix]`. Suffixes: `pi` always, `s ms us ns` for times,
/// `Hz kHz MHz GHz` for rates, and `sqrtN` when `sqrt_n` is given.
pub fn parse_number(entry: &Entry, unit: Unit, sqrt_n: Option<f64>) -> Result<f64, ConfigError> {
    let err = |m: String| ConfigError::at(&entry.origin, m);
    let raw = entry.value.trim();
    if raw == "pi" {
        return Ok(std::f64::consts::PI);
    }
    if let Some(den) = raw.strip_prefix("pi/") {
        let d: f64 = den.trim().parse().map_err(|_| err(format!("cannot parse `{raw}` as a number")))?;
        return Ok(std::f64::consts::PI / d);
    }
    let split = raw
        .char_indices()
        .find(|&(i, c)| c.is_ascii_alphabetic() && !(matches!(c, 'e' | 'E') && exponent_follows(&raw[i + 1..])))
        .map(|(i, _)| i)
        .unwrap_or(raw.len());
    let (num, suffix) = raw.split_at(split);
    let num = num.trim();
    let value: f64 = if num.is_empty() && !suffix.is_empty() {
        1.0
    } else {
        num.parse().map_err(|_| err(format!("cannot parse `{raw}` as a number")))?
    };
    let scale = match (suffix.trim(), unit) {
        ("", _) => 1.0,
        ("pi", _) => std::f64::consts::PI,
        ("sqrtN", _) => sqrt_n.ok_or_else(|| err("`sqrtN` is not accepted here".into()))?,
        ("s", Unit::Time) => 1.0,
        ("ms", Unit::Time) => 1e-3,
        ("us", Unit::Time) => 1e-6,
        ("ns", Unit::Time) => 1e-9,
        ("Hz", Unit::Rate) => 1.0,
        ("kHz", Unit::Rate) => 1e3,
        ("MHz", Unit::Rate) => 1e6,
        ("GHz", Unit::Rate) => 1e9,
        (s, _) => return Err(err(format!("unknown or misplaced unit `{s}` in `{raw}`"))),
    };
    let v = value * scale;
    if !v.is_finite() {
        return Err(err(format!("`{raw}` is not finite")));
    }
    Ok(v)
}

fn exponent_follows(rest: &str) -> bool {
    let rest = rest.strip_prefix(['+', '-']).unwrap_or(rest);
    rest.chars().next().is_some_and(|c| c.is_ascii_digit())
}
