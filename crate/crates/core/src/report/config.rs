use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{ArithmeticMode, Omega};
use crate::pade::{PadeOrder, DEFAULT_POLE_THRESHOLD};

/// Keys accepted in a configuration document.
pub const CONFIG_KEYS: [&str; 10] =
    ["omega", "states", "lambdas", "order", "pade", "cubic", "oracle", "format", "pole_threshold", "precision"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleMode {
    Off,
    Variational,
    Rspt,
    Both,
}

impl FromStr for OracleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "off" => Ok(OracleMode::Off),
            "variational" => Ok(OracleMode::Variational),
            "rspt" => Ok(OracleMode::Rspt),
            "both" => Ok(OracleMode::Both),
            other => Err(format!("expected off|variational|rspt|both, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutputFormat {
    Table,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(OutputFormat::Table),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("expected table|csv, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}, key `{}`: {}", self.key, self.message),
            None => write!(f, "key `{}`: {}", self.key, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub omega: Omega,
    pub states: Vec<usize>,
    pub lambdas: Vec<f64>,
    /// Highest order `K` of the energy series.
    pub order: usize,
    pub pade_orders: Vec<PadeOrder>,
    pub cubic: bool,
    pub oracle: OracleMode,
    pub format: OutputFormat,
    pub pole_threshold: f64,
    pub precision: ArithmeticMode,
}

/// Default grid: states 0–5, four couplings, `[3,3]` and `[3,4]`.
impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            omega: Omega::one(),
            states: (0..=5).collect(),
            lambdas: vec![0.005, 0.01, 0.05, 0.1],
            order: 8,
            pade_orders: vec![PadeOrder::new(3, 3), PadeOrder::new(3, 4)],
            cubic: true,
            oracle: OracleMode::Variational,
            format: OutputFormat::Table,
            pole_threshold: DEFAULT_POLE_THRESHOLD,
            precision: ArithmeticMode::ExactRational,
        }
    }
}

fn parse_list<T>(value: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    let items: Vec<T> =
        value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(item).collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err("list must not be empty".into());
    }
    Ok(items)
}

fn parse_positive(value: &str) -> Result<f64, String> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got {value:?}")),
    }
}

impl SweepConfig {
    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match key {
            "omega" => self.omega = value.parse().map_err(|e: crate::Error| e.to_string())?,
            "states" => self.states = parse_list(value, |s| s.parse().map_err(|_| format!("bad state index {s:?}")))?,
            "lambdas" => {
                self.lambdas = parse_list(value, |s| match s.parse::<f64>() {
                    Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
                    _ => Err(format!("lambda must be a finite number >= 0, got {s:?}")),
                })?
            }
            "order" => self.order = value.parse().map_err(|_| format!("expected a positive integer, got {value:?}"))?,
            "pade" => self.pade_orders = parse_list(value, |s| s.parse().map_err(|e: crate::Error| e.to_string()))?,
            "cubic" => {
                self.cubic = match value {
                    "on" | "1" | "true" => true,
                    "off" | "0" | "false" => false,
                    _ => return Err(format!("expected on|off, got {value:?}")),
                }
            }
            "oracle" => self.oracle = value.parse()?,
            "format" => self.format = value.parse()?,
            "pole_threshold" => self.pole_threshold = parse_positive(value)?,
            "precision" => self.precision = value.parse().map_err(|e: crate::Error| e.to_string())?,
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// Cross-field checks: `K ≥ 1` and `K ≥ N + M` for every Padé order.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |key: &str, message: String| Err(ConfigError { line: None, key: key.into(), message });
        if self.order < 1 {
            return fail("order", "order must be at least 1".into());
        }
        if let Some(widest) = self.pade_orders.iter().max_by_key(|o| o.matched_order()) {
            if widest.matched_order() > self.order {
                return fail(
                    "order",
                    format!("order {} is below {} required by Padé {widest}", self.order, widest.matched_order()),
                );
            }
        }
        Ok(())
    }
}

/// Parses a flat `key = value` document; `#` starts a comment line.
/// Missing keys keep their defaults.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut config = SweepConfig::default();
    let mut seen = HashSet::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let error = |key: &str, message: String| ConfigError { line: Some(line), key: key.into(), message };
        let (key, value) = content.split_once('=').ok_or_else(|| error(content, "expected `key = value`".into()))?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(error(key, "unknown key".into()));
        }
        if !seen.insert(key.to_string()) {
            return Err(error(key, "duplicate key".into()));
        }
        config.set(key, value).map_err(|message| error(key, message))?;
    }
    config.validate()?;
    Ok(config)
}
