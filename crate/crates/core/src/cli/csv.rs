use std::io::{self, Write};

use super::CliError;
use crate::sweeper::{Preset, SweepResult};

pub const EVOLVE_HEADER: &str = "lambda_t,beta1,beta2,gamma,theta,phi,negativity,concurrence,purity,trace_error";
pub const SWEEP_HEADER: &str =
    "lambda_t,beta1,beta2,gamma,theta,phi,zeta1,zeta2,negativity,concurrence,purity,trace_error";

/// 17 significant digits in scientific notation; parses back to the same f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_float(s: &str) -> Option<f64> {
    s.trim().parse().ok()
}

pub(super) fn write_row(out: &mut dyn Write, lead: Option<&str>, fields: &[f64]) -> io::Result<()> {
    let mut line = String::with_capacity(24 * (fields.len() + 1));
    if let Some(lead) = lead {
        line.push_str(lead);
        line.push(',');
    }
    for (k, x) in fields.iter().enumerate() {
        if k > 0 {
            line.push(',');
        }
        line.push_str(&format_float(*x));
    }
    line.push('\n');
    out.write_all(line.as_bytes())
}

pub(super) fn write_sweep(out: &mut dyn Write, result: &SweepResult, preset: Option<Preset>) -> Result<(), CliError> {
    match preset {
        Some(_) => writeln!(out, "preset,{SWEEP_HEADER}")?,
        None => writeln!(out, "{SWEEP_HEADER}")?,
    }
    let lead = preset.map(Preset::name);
    for row in &result.rows {
        let p = &row.params;
        let r = &row.record;
        let fields = [
            r.scaled_time,
            p.beta1,
            p.beta2,
            p.gamma,
            p.theta,
            p.phi,
            p.zeta1,
            p.zeta2,
            r.negativity,
            r.concurrence,
            r.purity,
            r.trace_error,
        ];
        write_row(out, lead, &fields)?;
    }
    out.flush()?;
    Ok(())
}
