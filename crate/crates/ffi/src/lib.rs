//! C ABI over `esd-core`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` or a
//! computing function and released by the matching `*_free`. Every fallible
//! call returns an [`EsdStatus`]; on failure a description is available from
//! [`esd_last_error`] on the same thread until the next failing call.
//!
//! Complex 4×4 matrices are passed as 32 doubles: row-major entries, each
//! stored as (re, im).

// `!(x >= 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use esd_core::entanglement::{concurrence, negativity, oracle_negativity_series};
use esd_core::evolution::evolve_series;
use esd_core::numerics::{Complex64, ComplexMatrix};
use esd_core::sweeper::{linspace, run_sweep, Preset, SweepRow};
use esd_core::{EntanglementRecord, Error, ModelParams};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownKey = 3,
    InvalidState = 4,
    Numerical = 5,
    OutOfRange = 6,
    UnknownPreset = 7,
    Panic = 8,
}

/// Opaque model parameter set.
pub struct EsdParams {
    inner: ModelParams,
}

/// Opaque time series produced by [`esd_evolve`].
pub struct EsdSeries {
    records: Vec<EntanglementRecord>,
}

/// Opaque sweep table produced by [`esd_figure`].
pub struct EsdSweep {
    rows: Vec<SweepRow>,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EsdRecord {
    pub scaled_time: f64,
    pub negativity: f64,
    pub concurrence: f64,
    pub purity: f64,
    pub trace_error: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EsdSweepRow {
    pub beta1: f64,
    pub beta2: f64,
    pub gamma: f64,
    pub theta: f64,
    pub phi: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    pub record: EsdRecord,
}

impl From<&EntanglementRecord> for EsdRecord {
    fn from(r: &EntanglementRecord) -> Self {
        Self {
            scaled_time: r.scaled_time,
            negativity: r.negativity,
            concurrence: r.concurrence,
            purity: r.purity,
            trace_error: r.trace_error,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: EsdStatus, msg: impl Into<String>) -> EsdStatus {
    set_error(msg);
    status
}

fn status_of(err: &Error) -> EsdStatus {
    match err {
        Error::InvalidState(_) | Error::DimensionMismatch { .. } => EsdStatus::InvalidState,
        Error::InvalidParams { .. } | Error::UnsupportedInitialState(_) | Error::EmptySeries => {
            EsdStatus::InvalidArgument
        }
        Error::UnknownPreset(_) => EsdStatus::UnknownPreset,
        Error::AtGridPoint { source, .. } => status_of(source),
        _ => EsdStatus::Numerical,
    }
}

fn from_core(err: Error) -> EsdStatus {
    fail(status_of(&err), err.to_string())
}

/// Runs `body`, converting panics into [`EsdStatus::Panic`].
fn guard(body: impl FnOnce() -> EsdStatus) -> EsdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(EsdStatus::Panic, "internal panic"),
    }
}

unsafe fn read_key<'a>(key: *const c_char) -> Result<&'a str, EsdStatus> {
    if key.is_null() {
        return Err(fail(EsdStatus::NullPointer, "key is null"));
    }
    CStr::from_ptr(key).to_str().map_err(|_| fail(EsdStatus::InvalidArgument, "key is not valid UTF-8"))
}

unsafe fn read_matrix4(data: *const f64) -> ComplexMatrix {
    let values = std::slice::from_raw_parts(data, 32);
    ComplexMatrix::from_row_major(4, 4, values.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

/// Message describing the most recent failure on this thread, or null.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn esd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// New parameter set with the defaults (ζ₁ = ζ₂ = 1, n_max = 6, everything else 0).
#[no_mangle]
pub extern "C" fn esd_params_new() -> *mut EsdParams {
    Box::into_raw(Box::new(EsdParams { inner: ModelParams::default() }))
}

/// # Safety
/// `params` must come from [`esd_params_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn esd_params_free(params: *mut EsdParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Sets one parameter by name: beta1, beta2, zeta1, zeta2, phi, gamma, theta, nmax, n0.
///
/// # Safety
/// `params` must be a live handle and `key` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn esd_params_set(params: *mut EsdParams, key: *const c_char, value: f64) -> EsdStatus {
    guard(|| {
        if params.is_null() {
            return fail(EsdStatus::NullPointer, "params is null");
        }
        let key = match read_key(key) {
            Ok(k) => k,
            Err(s) => return s,
        };
        let p = &mut (*params).inner;
        let count = |v: f64| -> Result<usize, EsdStatus> {
            if v >= 0.0 && v.fract() == 0.0 && v < 1e6 {
                Ok(v as usize)
            } else {
                Err(fail(EsdStatus::InvalidArgument, format!("{key} must be a nonnegative integer, got {value}")))
            }
        };
        match key {
            "beta1" => p.beta1 = value,
            "beta2" => p.beta2 = value,
            "zeta1" => p.zeta1 = value,
            "zeta2" => p.zeta2 = value,
            "phi" => p.phi = value,
            "gamma" => p.gamma = value,
            "theta" => p.theta = value,
            "nmax" => match count(value) {
                Ok(n) => p.n_max = n,
                Err(s) => return s,
            },
            "n0" => match count(value) {
                Ok(n) => p.n0 = n,
                Err(s) => return s,
            },
            other => return fail(EsdStatus::UnknownKey, format!("unknown parameter '{other}'")),
        }
        EsdStatus::Ok
    })
}

/// Reads one parameter by name.
///
/// # Safety
/// `params` must be a live handle, `key` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn esd_params_get(params: *const EsdParams, key: *const c_char, out: *mut f64) -> EsdStatus {
    guard(|| {
        if params.is_null() || out.is_null() {
            return fail(EsdStatus::NullPointer, "params or out is null");
        }
        let key = match read_key(key) {
            Ok(k) => k,
            Err(s) => return s,
        };
        let p = &(*params).inner;
        *out = match key {
            "beta1" => p.beta1,
            "beta2" => p.beta2,
            "zeta1" => p.zeta1,
            "zeta2" => p.zeta2,
            "phi" => p.phi,
            "gamma" => p.gamma,
            "theta" => p.theta,
            "nmax" => p.n_max as f64,
            "n0" => p.n0 as f64,
            other => return fail(EsdStatus::UnknownKey, format!("unknown parameter '{other}'")),
        };
        EsdStatus::Ok
    })
}

/// Evolves the initial state and samples `samples` scaled times from 0 to `t_max`.
///
/// # Safety
/// `params` must be a live handle and `out` writable. On success `*out`
/// owns a series to be released with [`esd_series_free`].
#[no_mangle]
pub unsafe extern "C" fn esd_evolve(
    params: *const EsdParams,
    t_max: f64,
    samples: usize,
    out: *mut *mut EsdSeries,
) -> EsdStatus {
    guard(|| {
        if params.is_null() || out.is_null() {
            return fail(EsdStatus::NullPointer, "params or out is null");
        }
        *out = ptr::null_mut();
        if samples < 2 || !(t_max > 0.0) || !t_max.is_finite() {
            return fail(EsdStatus::InvalidArgument, "need samples >= 2 and a positive finite t_max");
        }
        match evolve_series(&(*params).inner, &linspace(0.0, t_max, samples)) {
            Ok(records) => {
                *out = Box::into_raw(Box::new(EsdSeries { records }));
                EsdStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `series` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn esd_series_len(series: *const EsdSeries) -> usize {
    if series.is_null() {
        0
    } else {
        (&*series).records.len()
    }
}

/// # Safety
/// `series` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn esd_series_get(series: *const EsdSeries, index: usize, out: *mut EsdRecord) -> EsdStatus {
    guard(|| {
        if series.is_null() || out.is_null() {
            return fail(EsdStatus::NullPointer, "series or out is null");
        }
        match (&*series).records.get(index) {
            Some(r) => {
                *out = r.into();
                EsdStatus::Ok
            }
            None => fail(EsdStatus::OutOfRange, format!("index {index} out of range")),
        }
    })
}

/// # Safety
/// `series` must come from [`esd_evolve`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn esd_series_free(series: *mut EsdSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Negativity series from the three-state oracle (vacuum initial phonon state only).
///
/// # Safety
/// `times` must point to `count` ascending doubles and `out` to `count` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn esd_oracle_negativity(
    params: *const EsdParams,
    times: *const f64,
    count: usize,
    out: *mut f64,
) -> EsdStatus {
    guard(|| {
        if params.is_null() || (count > 0 && (times.is_null() || out.is_null())) {
            return fail(EsdStatus::NullPointer, "null argument");
        }
        if count == 0 {
            return EsdStatus::Ok;
        }
        let times = std::slice::from_raw_parts(times, count);
        match oracle_negativity_series(&(*params).inner, times) {
            Ok(series) => {
                let dst = std::slice::from_raw_parts_mut(out, count);
                for (d, (_, n)) in dst.iter_mut().zip(series) {
                    *d = n;
                }
                EsdStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Negativity of a 4×4 two-qubit density matrix (32 doubles, row-major re/im pairs).
///
/// # Safety
/// `rho` must point to 32 readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esd_negativity(rho: *const f64, out: *mut f64) -> EsdStatus {
    measure(rho, out, negativity)
}

/// Wootters concurrence of a 4×4 two-qubit density matrix (same layout as [`esd_negativity`]).
///
/// # Safety
/// `rho` must point to 32 readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esd_concurrence(rho: *const f64, out: *mut f64) -> EsdStatus {
    measure(rho, out, concurrence)
}

unsafe fn measure(rho: *const f64, out: *mut f64, f: fn(&ComplexMatrix) -> esd_core::Result<f64>) -> EsdStatus {
    guard(|| {
        if rho.is_null() || out.is_null() {
            return fail(EsdStatus::NullPointer, "rho or out is null");
        }
        match f(&read_matrix4(rho)) {
            Ok(v) => {
                *out = v;
                EsdStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Runs a figure preset (fig1, fig2a, fig2b, fig3) with its default grid.
/// `threads` caps parallelism; 0 uses all cores.
///
/// # Safety
/// `name` must be NUL-terminated and `out` writable. On success `*out` owns
/// a table to be released with [`esd_sweep_free`].
#[no_mangle]
pub unsafe extern "C" fn esd_figure(name: *const c_char, threads: usize, out: *mut *mut EsdSweep) -> EsdStatus {
    guard(|| {
        if out.is_null() {
            return fail(EsdStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let name = match read_key(name) {
            Ok(k) => k,
            Err(s) => return s,
        };
        let preset: Preset = match name.parse() {
            Ok(p) => p,
            Err(e) => return from_core(e),
        };
        let threads = if threads == 0 { None } else { Some(threads) };
        match run_sweep(&preset.grid(), threads) {
            Ok(result) => {
                *out = Box::into_raw(Box::new(EsdSweep { rows: result.rows }));
                EsdStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `sweep` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn esd_sweep_len(sweep: *const EsdSweep) -> usize {
    if sweep.is_null() {
        0
    } else {
        (&*sweep).rows.len()
    }
}

/// # Safety
/// `sweep` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn esd_sweep_get(sweep: *const EsdSweep, index: usize, out: *mut EsdSweepRow) -> EsdStatus {
    guard(|| {
        if sweep.is_null() || out.is_null() {
            return fail(EsdStatus::NullPointer, "sweep or out is null");
        }
        match (&*sweep).rows.get(index) {
            Some(row) => {
                let p = &row.params;
                *out = EsdSweepRow {
                    beta1: p.beta1,
                    beta2: p.beta2,
                    gamma: p.gamma,
                    theta: p.theta,
                    phi: p.phi,
                    zeta1: p.zeta1,
                    zeta2: p.zeta2,
                    record: (&row.record).into(),
                };
                EsdStatus::Ok
            }
            None => fail(EsdStatus::OutOfRange, format!("index {index} out of range")),
        }
    })
}

/// # Safety
/// `sweep` must come from [`esd_figure`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn esd_sweep_free(sweep: *mut EsdSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}
