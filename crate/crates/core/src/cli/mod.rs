//! Library side of the `esd` command-line tool.
//!
//! Exit codes: 0 success, 1 selftest failure, 2 configuration error,
//! 3 numerical failure.

mod config;
mod csv;
mod selftest;

use std::io::{self, Write};

use thiserror::Error;

pub use config::{parse_config, parse_real, RunConfig, KEYS};
pub use csv::{format_float, parse_float, EVOLVE_HEADER, SWEEP_HEADER};
pub use selftest::{cmd_selftest, CheckOutcome, SelftestOptions, SelftestReport};

use crate::error::Error as NumericalError;
use crate::evolution::evolve_series;
use crate::sweeper::{linspace, run_sweep, Preset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "ESD_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("unknown preset '{0}' (expected fig1, fig2a, fig2b or fig3)")]
    UnknownPreset(String),

    #[error("numerical failure: {0}")]
    Numerical(#[from] NumericalError),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("selftest failed: {0} check(s) did not pass")]
    SelftestFailed(usize),
}

impl CliError {
    pub fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config { key: key.into(), reason: reason.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::UnknownPreset(_) => EXIT_CONFIG,
            CliError::Numerical(_) | CliError::Io(_) => EXIT_NUMERICAL,
            CliError::SelftestFailed(_) => EXIT_SELFTEST_FAILED,
        }
    }
}

/// Reads `ESD_THREADS`; unset means machine parallelism.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::config(THREADS_ENV, format!("`{v}` is not a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

/// Single trajectory as CSV.
pub fn cmd_evolve(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let p = config.model_params()?;
    let tg = config.grid.time_grid;
    let times = linspace(0.0, tg.t_max, tg.samples);
    let records = evolve_series(&p, &times)?;
    writeln!(out, "{EVOLVE_HEADER}")?;
    for r in &records {
        let fields = [
            r.scaled_time,
            p.beta1,
            p.beta2,
            p.gamma,
            p.theta,
            p.phi,
            r.negativity,
            r.concurrence,
            r.purity,
            r.trace_error,
        ];
        csv::write_row(out, None, &fields)?;
    }
    Ok(())
}

/// Cartesian sweep as CSV.
pub fn cmd_sweep(config: &RunConfig, threads: Option<usize>, out: &mut dyn Write) -> Result<(), CliError> {
    let result = run_sweep(&config.grid, threads)?;
    csv::write_sweep(out, &result, None)
}

/// Figure preset as CSV with a leading `preset` column.
///
/// The config file and flags override the preset grid; any `preset` key they
/// carry is replaced by `name`.
pub fn cmd_figure(
    name: &str,
    contents: &str,
    overrides: &[(String, String)],
    threads: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let preset: Preset = name.parse().map_err(|_| CliError::UnknownPreset(name.to_string()))?;
    let mut flags: Vec<(String, String)> =
        overrides.iter().filter(|(k, _)| k.trim_start_matches("--") != "preset").cloned().collect();
    flags.push(("preset".into(), preset.name().into()));
    let config = parse_config(contents, &flags)?;
    let result = run_sweep(&config.grid, threads)?;
    csv::write_sweep(out, &result, Some(preset))
}
