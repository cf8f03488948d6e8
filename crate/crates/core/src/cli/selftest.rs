//! Cross-oracle checks run by `esd selftest`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entanglement::{negativity, oracle_negativity_series, xstate_matrix, xstate_negativity};
use crate::error::Result;
use crate::evolution::{
    evolve_series, propagate_closed_form, propagate_kraus_series, Propagator, DEFAULT_MAX_TERMS, DEFAULT_SERIES_TOL,
};
use crate::model::{build_effective_hamiltonian, initial_density, ModelParams};
use crate::numerics::{frobenius_distance, ComplexMatrix};
use crate::sweeper::{detect_zero_intervals, linspace, run_sweep, Preset, DEFAULT_ZERO_THRESHOLD};

const SEED: u64 = 0x5eed_e5d0;

#[derive(Debug, Clone, Default)]
pub struct SelftestOptions {
    /// Replaces every check's tolerance.
    pub tolerance_override: Option<f64>,
    /// Negates the Hamiltonian fed to the closed form (mutation fixture).
    pub flip_hamiltonian_sign: bool,
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub tolerance: f64,
    pub observed: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SelftestReport {
    pub checks: Vec<CheckOutcome>,
    pub notes: Vec<String>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<24} tolerance {:.1e}  observed {:.3e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.tolerance,
                c.observed
            )?;
        }
        for n in &self.notes {
            writeln!(f, "note {n}")?;
        }
        write!(f, "{}", if self.passed() { "selftest passed" } else { "selftest FAILED" })
    }
}

fn vacuum_grid() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for beta1 in [0.0, 1.0, 20.0] {
        for gamma in [0.0, 0.1, 0.7] {
            for theta in [0.0, FRAC_PI_4, FRAC_PI_2] {
                out.push(ModelParams { beta1, gamma, theta, ..Default::default() });
            }
        }
    }
    out
}

/// Random full-rank density matrix.
pub(crate) fn random_density(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr)
}

fn kraus_vs_closed_form(opts: &SelftestOptions) -> Result<f64> {
    let sign = if opts.flip_hamiltonian_sign { -1.0 } else { 1.0 };
    let mut worst: f64 = 0.0;
    let mut compare = |rho0: &ComplexMatrix, h: &ComplexMatrix, gamma: f64, t: f64| -> Result<()> {
        let prop = Propagator::new(&h.scale_real(sign), gamma)?;
        let closed = propagate_closed_form(rho0, &prop, t)?;
        let kraus = propagate_kraus_series(rho0, h, gamma, t, DEFAULT_SERIES_TOL, DEFAULT_MAX_TERMS)?;
        worst = worst.max(frobenius_distance(&closed, &kraus)?);
        Ok(())
    };

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let p = ModelParams { beta1: 1.0, beta2: 0.5, zeta2: 0.8, phi: 0.3, gamma: 0.1, ..Default::default() };
    let h = build_effective_hamiltonian(&p);
    let rho0 = random_density(h.rows(), &mut rng);
    compare(&rho0, &h, p.gamma, p.model_time(3.0))?;

    for p in vacuum_grid() {
        let h = build_effective_hamiltonian(&p);
        let rho0 = initial_density(&p);
        for st in [5.0, 12.5, 25.0] {
            compare(&rho0, &h, p.gamma, p.model_time(st))?;
        }
    }
    Ok(worst)
}

fn oracle_vs_full() -> Result<f64> {
    let times = linspace(0.0, 25.0, 20);
    let mut worst: f64 = 0.0;
    for p in vacuum_grid() {
        let full = evolve_series(&p, &times)?;
        let oracle = oracle_negativity_series(&p, &times)?;
        for (r, (_, n)) in full.iter().zip(oracle) {
            worst = worst.max((r.negativity - n).abs());
        }
    }
    Ok(worst)
}

fn beta2_invariance() -> Result<f64> {
    let times = linspace(0.0, 25.0, 20);
    let mut worst: f64 = 0.0;
    for p in vacuum_grid() {
        let a = evolve_series(&ModelParams { beta2: 0.0, ..p }, &times)?;
        let b = evolve_series(&ModelParams { beta2: 100.0, ..p }, &times)?;
        for (x, y) in a.iter().zip(&b) {
            worst = worst
                .max((x.negativity - y.negativity).abs())
                .max((x.concurrence - y.concurrence).abs())
                .max((x.purity - y.purity).abs());
        }
    }
    Ok(worst)
}

fn xstate_shortcut() -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let (pops, c) = random_xstate(&mut rng);
        let fast = xstate_negativity(pops, c)?;
        let slow = negativity(&xstate_matrix(pops, c))?;
        worst = worst.max((fast - slow).abs());
    }
    Ok(worst)
}

/// Random X-state with a single ab↔ba coherence; `aa` is zero half the time.
pub(crate) fn random_xstate(rng: &mut impl Rng) -> ([f64; 4], Complex64) {
    let mut pops = [0.0; 4];
    for p in pops.iter_mut() {
        *p = rng.gen_range(0.0..1.0);
    }
    if rng.gen_bool(0.5) {
        pops[0] = 0.0;
    }
    let total: f64 = pops.iter().sum();
    for p in pops.iter_mut() {
        *p /= total;
    }
    let bound = (pops[1] * pops[2]).sqrt();
    let c = Complex64::from_polar(bound * rng.gen_range(0.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
    (pops, c)
}

fn analytic_benchmark() -> Result<f64> {
    let p = ModelParams::default();
    let times = linspace(0.0, 25.0, 501);
    let records = evolve_series(&p, &times)?;
    Ok(records
        .iter()
        .map(|r| {
            let want = (2f64.sqrt() - 1.0) * (2.0 * r.scaled_time).sin().powi(2) / 2.0;
            (r.negativity - want).abs()
        })
        .fold(0.0, f64::max))
}

fn fig3_zero_intervals() -> Result<String> {
    let grid = Preset::Fig3.grid();
    let result = run_sweep(&grid, None)?;
    let idx = grid.points().iter().position(|p| p.gamma == 0.7).unwrap_or(result.points - 1);
    let intervals = detect_zero_intervals(&result.negativity_series(idx), DEFAULT_ZERO_THRESHOLD)?;
    let widest = intervals.iter().map(|(a, b)| b - a).fold(0.0, f64::max);
    let long = intervals.iter().filter(|(a, b)| b - a >= 0.5).count();
    Ok(format!(
        "fig3 gamma=0.7: {} zero interval(s) at threshold {:.0e}, widest {:.3} in lambda_t, {} of width >= 0.5",
        intervals.len(),
        DEFAULT_ZERO_THRESHOLD,
        widest,
        long
    ))
}

/// Runs every cross-check. Numerical errors inside a check count as failures.
pub fn cmd_selftest(opts: &SelftestOptions) -> SelftestReport {
    type Check = (&'static str, f64, fn(&SelftestOptions) -> Result<f64>);
    let checks: [Check; 5] = [
        ("kraus_vs_closed_form", 1e-8, kraus_vs_closed_form),
        ("oracle_vs_full_space", 1e-9, |_| oracle_vs_full()),
        ("beta2_invariance", 1e-12, |_| beta2_invariance()),
        ("xstate_shortcut", 1e-10, |_| xstate_shortcut()),
        ("analytic_benchmark", 1e-9, |_| analytic_benchmark()),
    ];
    let mut report = SelftestReport::default();
    for (name, default_tol, run) in checks {
        let tolerance = opts.tolerance_override.unwrap_or(default_tol);
        let (observed, passed) = match run(opts) {
            Ok(err) => (err, err <= tolerance),
            Err(e) => {
                report.notes.push(format!("{name}: {e}"));
                (f64::INFINITY, false)
            }
        };
        report.checks.push(CheckOutcome { name, tolerance, observed, passed });
    }
    match fig3_zero_intervals() {
        Ok(note) => report.notes.push(note),
        Err(e) => report.notes.push(format!("fig3 zero intervals: {e}")),
    }
    report
}
