//! Cartesian parameter sweeps and the figure presets.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::entanglement::EntanglementRecord;
use crate::error::{Error, Result};
use crate::evolution::evolve_series;
use crate::model::ModelParams;

pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig1,
    Fig2a,
    Fig2b,
    Fig3,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig1, Preset::Fig2a, Preset::Fig2b, Preset::Fig3];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3 => "fig3",
        }
    }

    /// Default grid. Axis extents follow the plotted ranges: λt up to 25 and β up to 20.
    pub fn grid(self) -> SweepGrid {
        let mut grid = SweepGrid { preset: Some(self), ..SweepGrid::default() };
        match self {
            Preset::Fig1 => {
                grid.axes.beta1 = linspace(0.0, 20.0, 41);
            }
            Preset::Fig2a => {
                grid.axes.theta = vec![FRAC_PI_2];
                grid.axes.beta1 = vec![2.0, 5.0, 15.0];
            }
            Preset::Fig2b => {
                grid.axes.theta = vec![FRAC_PI_4];
                grid.axes.beta1 = vec![2.0, 5.0, 15.0];
            }
            Preset::Fig3 => {
                // β₁/β₂ = 1 with β₁ = 1
                grid.axes.theta = vec![FRAC_PI_2];
                grid.axes.beta1 = vec![1.0];
                grid.axes.beta2 = vec![1.0];
                grid.axes.gamma = vec![0.01, 0.1, 0.7];
            }
        }
        grid
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s.trim()).ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Values swept along each parameter axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxes {
    pub beta1: Vec<f64>,
    pub beta2: Vec<f64>,
    pub gamma: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub zeta2: Vec<f64>,
}

impl Default for SweepAxes {
    fn default() -> Self {
        Self {
            beta1: vec![0.0],
            beta2: vec![0.0],
            gamma: vec![0.0],
            theta: vec![0.0],
            phi: vec![0.0],
            zeta2: vec![1.0],
        }
    }
}

impl SweepAxes {
    fn named(&self) -> [(&'static str, &Vec<f64>); 6] {
        [
            ("beta1", &self.beta1),
            ("beta2", &self.beta2),
            ("gamma", &self.gamma),
            ("theta", &self.theta),
            ("phi", &self.phi),
            ("zeta2", &self.zeta2),
        ]
    }

    pub fn len(&self) -> usize {
        self.named().iter().map(|(_, v)| v.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_max: f64,
    pub samples: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { t_max: 25.0, samples: 501 }
    }
}

impl TimeGrid {
    /// `samples` equally spaced scaled times from 0 to `t_max` inclusive.
    pub fn times(&self) -> Vec<f64> {
        linspace(0.0, self.t_max, self.samples)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepGrid {
    /// Supplies ζ₁, the Fock truncation and n0; the swept fields are replaced per point.
    pub base: ModelParams,
    pub axes: SweepAxes,
    pub time_grid: TimeGrid,
    pub preset: Option<Preset>,
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        for (name, values) in self.axes.named() {
            if values.is_empty() {
                return Err(Error::InvalidParams { name, reason: "axis has no values".into() });
            }
        }
        if self.time_grid.samples < 2 {
            return Err(Error::InvalidParams {
                name: "samples",
                reason: format!("{} is below 2", self.time_grid.samples),
            });
        }
        if !(self.time_grid.t_max > 0.0) || !self.time_grid.t_max.is_finite() {
            return Err(Error::InvalidParams {
                name: "tmax",
                reason: format!("{} is not positive", self.time_grid.t_max),
            });
        }
        for p in self.points() {
            p.validate()?;
        }
        Ok(())
    }

    /// Grid points in row order; the last axis varies fastest.
    pub fn points(&self) -> Vec<ModelParams> {
        let a = &self.axes;
        let mut out = Vec::with_capacity(a.len());
        for &beta1 in &a.beta1 {
            for &beta2 in &a.beta2 {
                for &gamma in &a.gamma {
                    for &theta in &a.theta {
                        for &phi in &a.phi {
                            for &zeta2 in &a.zeta2 {
                                out.push(ModelParams { beta1, beta2, gamma, theta, phi, zeta2, ..self.base });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub params: ModelParams,
    pub record: EntanglementRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub preset: Option<Preset>,
    pub points: usize,
    pub samples: usize,
    /// Grid-major, time-minor.
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Rows belonging to grid point `index`.
    pub fn series(&self, index: usize) -> &[SweepRow] {
        &self.rows[index * self.samples..(index + 1) * self.samples]
    }

    /// (λt, negativity) pairs for grid point `index`.
    pub fn negativity_series(&self, index: usize) -> Vec<(f64, f64)> {
        self.series(index).iter().map(|r| (r.record.scaled_time, r.record.negativity)).collect()
    }
}

/// Evaluates every grid point; `threads` caps parallelism (None uses the global pool).
pub fn run_sweep(grid: &SweepGrid, threads: Option<usize>) -> Result<SweepResult> {
    grid.validate()?;
    let points = grid.points();
    let times = grid.time_grid.times();
    let eval = || -> Result<Vec<Vec<EntanglementRecord>>> {
        points
            .par_iter()
            .enumerate()
            .map(|(index, p)| {
                evolve_series(p, &times).map_err(|e| Error::AtGridPoint {
                    index,
                    point: describe(p),
                    source: Box::new(e),
                })
            })
            .collect()
    };
    let series = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParams { name: "threads", reason: e.to_string() })?
            .install(eval)?,
        None => eval()?,
    };
    let rows = points
        .iter()
        .zip(series)
        .flat_map(|(p, records)| records.into_iter().map(move |record| SweepRow { params: *p, record }))
        .collect();
    Ok(SweepResult { preset: grid.preset, points: points.len(), samples: times.len(), rows })
}

fn describe(p: &ModelParams) -> String {
    format!(
        "beta1={} beta2={} gamma={} theta={} phi={} zeta1={} zeta2={}",
        p.beta1, p.beta2, p.gamma, p.theta, p.phi, p.zeta1, p.zeta2
    )
}

/// Maximal intervals on which the negativity stays at or below `threshold`.
///
/// Endpoints are linearly interpolated to the threshold crossing between the
/// neighbouring samples; at the ends of the series they are the first/last time.
pub fn detect_zero_intervals(series: &[(f64, f64)], threshold: f64) -> Result<Vec<(f64, f64)>> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    if !(threshold > 0.0) {
        return Err(Error::InvalidParams { name: "threshold", reason: format!("{threshold} is not positive") });
    }
    let crossing = |a: (f64, f64), b: (f64, f64)| {
        let (t0, n0) = a;
        let (t1, n1) = b;
        if n1 == n0 {
            return t0;
        }
        t0 + (threshold - n0) * (t1 - t0) / (n1 - n0)
    };
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    for (k, &(t, n)) in series.iter().enumerate() {
        let below = n <= threshold;
        match (below, start) {
            (true, None) => {
                start = Some(if k == 0 { t } else { crossing(series[k - 1], series[k]) });
            }
            (false, Some(s)) => {
                out.push((s, crossing(series[k - 1], series[k])));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, series[series.len() - 1].0));
    }
    Ok(out)
}

/// Trapezoidal time average of the negativity.
pub fn time_average(series: &[(f64, f64)]) -> Result<f64> {
    match series {
        [] => Err(Error::EmptySeries),
        [(_, n)] => Ok(*n),
        _ => {
            let span = series[series.len() - 1].0 - series[0].0;
            let area: f64 = series.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum();
            Ok(if span > 0.0 { area / span } else { series[0].1 })
        }
    }
}

/// Fraction of samples with negativity at or below `threshold`.
pub fn zero_fraction(series: &[(f64, f64)], threshold: f64) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(series.iter().filter(|(_, n)| *n <= threshold).count() as f64 / series.len() as f64)
}

pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (count - 1) as f64;
            (0..count).map(|k| if k == count - 1 { end } else { start + step * k as f64 }).collect()
        }
    }
}
