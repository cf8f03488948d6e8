//! Flat `key = value` configuration with command-line overrides.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::CliError;
use crate::error::Error;
use crate::model::ModelParams;
use crate::sweeper::{Preset, SweepGrid};

/// Recognized keys; each has a matching `--key` flag.
pub const KEYS: &[&str] =
    &["beta1", "beta2", "zeta1", "zeta2", "phi", "gamma", "theta", "nmax", "n0", "tmax", "samples", "out", "preset"];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub grid: SweepGrid,
    pub out: Option<String>,
}

impl RunConfig {
    /// The single parameter point used by `evolve`.
    pub fn model_params(&self) -> Result<ModelParams, CliError> {
        let a = &self.grid.axes;
        let single = |key: &'static str, v: &[f64]| -> Result<f64, CliError> {
            match v {
                [x] => Ok(*x),
                _ => Err(CliError::config(key, format!("expected a single value, got {}", v.len()))),
            }
        };
        Ok(ModelParams {
            beta1: single("beta1", &a.beta1)?,
            beta2: single("beta2", &a.beta2)?,
            zeta2: single("zeta2", &a.zeta2)?,
            phi: single("phi", &a.phi)?,
            gamma: single("gamma", &a.gamma)?,
            theta: single("theta", &a.theta)?,
            ..self.grid.base
        })
    }
}

/// Parses the config file contents, then applies `flags` (key, value) on top.
///
/// A `preset` key starts from that preset's grid instead of the defaults.
pub fn parse_config(contents: &str, flags: &[(String, String)]) -> Result<RunConfig, CliError> {
    let mut entries: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw) in contents.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(line, format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim();
        check_key(key)?;
        entries.insert(key.to_string(), value.trim().to_string());
    }
    for (key, value) in flags {
        let key = key.trim_start_matches("--");
        check_key(key)?;
        entries.insert(key.to_string(), value.trim().to_string());
    }

    let mut config = RunConfig::default();
    if let Some(name) = entries.get("preset") {
        let preset: Preset = name.parse().map_err(|_| CliError::UnknownPreset(name.clone()))?;
        config.grid = preset.grid();
    }
    for (key, value) in &entries {
        apply(&mut config, key, value)?;
    }
    config.grid.validate().map_err(|e| match e {
        Error::InvalidParams { name, reason } => CliError::config(name, reason),
        other => CliError::config("config", other.to_string()),
    })?;
    Ok(config)
}

fn check_key(key: &str) -> Result<(), CliError> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(CliError::config(key, "unknown key"))
    }
}

fn apply(config: &mut RunConfig, key: &str, value: &str) -> Result<(), CliError> {
    let grid = &mut config.grid;
    let axes = &mut grid.axes;
    match key {
        "beta1" => axes.beta1 = parse_list(key, value)?,
        "beta2" => axes.beta2 = parse_list(key, value)?,
        "zeta2" => axes.zeta2 = parse_list(key, value)?,
        "phi" => axes.phi = parse_list(key, value)?,
        "gamma" => axes.gamma = parse_list(key, value)?,
        "theta" => axes.theta = parse_list(key, value)?,
        "zeta1" => grid.base.zeta1 = parse_real(key, value)?,
        "nmax" => grid.base.n_max = parse_count(key, value)?,
        "n0" => grid.base.n0 = parse_count(key, value)?,
        "tmax" => grid.time_grid.t_max = parse_real(key, value)?,
        "samples" => grid.time_grid.samples = parse_count(key, value)?,
        "out" => config.out = Some(value.to_string()),
        "preset" => {}
        _ => return Err(CliError::config(key, "unknown key")),
    }
    Ok(())
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value.split(',').map(|v| parse_real(key, v)).collect()
}

fn parse_count(key: &str, value: &str) -> Result<usize, CliError> {
    value.trim().parse().map_err(|_| CliError::config(key, format!("`{value}` is not a nonnegative integer")))
}

/// A real number, or a multiple of π such as `pi/2`, `-pi/4` or `3*pi/4`.
pub fn parse_real(key: &str, value: &str) -> Result<f64, CliError> {
    let v: String = value.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::config(key, format!("`{}` is not a number", value.trim()));
    let x = if let Some((coef, rest)) = v.split_once("pi") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        let d = match rest {
            "" => 1.0,
            r => r.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
        };
        c * PI / d
    } else {
        v.parse::<f64>().map_err(|_| bad())?
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::config(key, format!("`{}` is not finite", value.trim())))
    }
}
