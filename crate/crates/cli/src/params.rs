use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lotto_core::LottoError;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::Format;

/// Keys accepted in `params` and on the command line.
pub const KNOWN_KEYS: &[&str] = &[
    "P",
    "RA",
    "RB",
    "q",
    "w",
    "p",
    "MA",
    "cA",
    "MB",
    "cB",
    "Pi",
    "samples",
    "checks",
    "resolution",
    "seed",
    "cmd",
];

/// Keys that may be swept.
pub const SWEEPABLE: &[&str] = &["P", "RA", "RB", "q", "MA", "cA", "MB", "cB", "Pi"];

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Lotto(LottoError),
    Verification(usize),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Lotto(e) if e.is_validation() => 1,
            CliError::Lotto(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Validation(m) => ("validation", m.clone()),
            CliError::Io(m) => ("io", m.clone()),
            CliError::Lotto(e) if e.is_validation() => ("validation", e.to_string()),
            CliError::Lotto(e) => ("solver", e.to_string()),
            CliError::Verification(n) => ("verification", format!("{n} check(s) failed")),
        };
        json!({"error": kind, "message": message, "exit_code": self.exit_code()})
    }
}

impl From<LottoError> for CliError {
    fn from(e: LottoError) -> Self {
        CliError::Lotto(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Validation(msg.into()))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default)]
    pub sweep: Vec<Axis>,
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub axis: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    /// Parse `name:start:stop:steps`.
    pub fn parse(text: &str) -> CliResult<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 4 {
            return invalid(format!(
                "axis `{text}` is not of the form name:start:stop:steps"
            ));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CliError::Validation(format!("axis `{text}`: `{s}` is not a number")))
        };
        let steps = parts[3]
            .parse::<usize>()
            .map_err(|_| CliError::Validation(format!("axis `{text}`: bad step count")))?;
        Ok(Axis {
            axis: parts[0].to_string(),
            start: num(parts[1])?,
            stop: num(parts[2])?,
            steps,
        })
    }

    pub fn check(&self) -> CliResult<()> {
        if !SWEEPABLE.contains(&self.axis.as_str()) {
            return invalid(format!(
                "cannot sweep `{}`; sweepable parameters are {}",
                self.axis,
                SWEEPABLE.join(", ")
            ));
        }
        if self.steps == 0 || !self.start.is_finite() || !self.stop.is_finite() {
            return invalid(format!(
                "axis `{}` needs finite bounds and steps >= 1",
                self.axis
            ));
        }
        Ok(())
    }

    /// Evenly spaced values including both ends.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

pub fn load_config(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("bad config {}: {e}", path.display())))
}

/// Flat parameter map after defaults, config file and flags are merged.
#[derive(Debug, Clone)]
pub struct Params(BTreeMap<String, Value>);

impl Params {
    pub fn merge(
        config: &BTreeMap<String, Value>,
        flags: Vec<(&'static str, Value)>,
    ) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        map.insert("RB".to_string(), json!(1.0));
        map.insert("q".to_string(), json!(1.0));
        for (k, v) in config {
            if !KNOWN_KEYS.contains(&k.as_str()) {
                return invalid(format!("unknown parameter `{k}`"));
            }
            map.insert(k.clone(), v.clone());
        }
        for (k, v) in flags {
            map.insert(k.to_string(), v);
        }
        Ok(Params(map))
    }

    pub fn set(&mut self, key: &str, v: f64) {
        self.0.insert(key.to_string(), json!(v));
    }

    pub fn has(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    pub fn num(&self, key: &str) -> CliResult<f64> {
        match self.0.get(key) {
            None => invalid(format!("missing parameter `{key}`")),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| CliError::Validation(format!("parameter `{key}` must be a number"))),
        }
    }

    pub fn list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_f64().ok_or_else(|| {
                        CliError::Validation(format!("parameter `{key}` must contain numbers"))
                    })
                })
                .collect::<CliResult<Vec<_>>>()
                .map(Some),
            Some(v) => match v.as_f64() {
                Some(x) => Ok(Some(vec![x])),
                None => invalid(format!("parameter `{key}` must be a number or a list")),
            },
        }
    }

    pub fn count(&self, key: &str, default: u64) -> CliResult<u64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v.as_u64().ok_or_else(|| {
                CliError::Validation(format!("parameter `{key}` must be a non-negative integer"))
            }),
        }
    }

    pub fn strings(&self, key: &str) -> CliResult<Vec<String>> {
        match self.0.get(key) {
            None => Ok(Vec::new()),
            Some(Value::String(s)) => Ok(vec![s.clone()]),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_str().map(str::to_string).ok_or_else(|| {
                        CliError::Validation(format!("parameter `{key}` must contain strings"))
                    })
                })
                .collect(),
            Some(_) => invalid(format!("parameter `{key}` must be a string or a list")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values_hit_both_ends() {
        let a = Axis::parse("P:0:3:151").unwrap();
        let v = a.values();
        assert_eq!(v.len(), 151);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[150], 3.0);
        assert_eq!(v[50], 1.0);
        assert!(Axis::parse("P:0:3").is_err());
        assert!(Axis::parse("w:0:1:3").unwrap().check().is_err());
    }

    #[test]
    fn flags_override_config_which_overrides_defaults() {
        let mut config = BTreeMap::new();
        config.insert("RB".to_string(), json!(2.0));
        config.insert("RA".to_string(), json!(0.5));
        let p = Params::merge(&config, vec![("RA", json!(0.7))]).unwrap();
        assert_eq!(p.num("RB").unwrap(), 2.0);
        assert_eq!(p.num("RA").unwrap(), 0.7);
        assert_eq!(p.num("q").unwrap(), 1.0);

        config.insert("bogus".to_string(), json!(1));
        assert!(Params::merge(&config, vec![]).is_err());
    }
}
