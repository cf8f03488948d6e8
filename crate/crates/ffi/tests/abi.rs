use std::ffi::{CStr, CString};
use std::ptr;

use esd_ffi::*;

fn key(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = esd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

/// Row-major (re, im) pairs of |ψ⟩⟨ψ| for real amplitudes.
fn pure_state(amps: [f64; 4]) -> [f64; 32] {
    let mut out = [0.0; 32];
    for i in 0..4 {
        for j in 0..4 {
            out[2 * (4 * i + j)] = amps[i] * amps[j];
        }
    }
    out
}

#[test]
fn params_roundtrip_and_unknown_key() {
    let p = esd_params_new();
    assert!(!p.is_null());
    unsafe {
        assert_eq!(esd_params_set(p, key("beta1").as_ptr(), 2.5), EsdStatus::Ok);
        assert_eq!(esd_params_set(p, key("nmax").as_ptr(), 8.0), EsdStatus::Ok);
        let mut v = 0.0;
        assert_eq!(esd_params_get(p, key("beta1").as_ptr(), &mut v), EsdStatus::Ok);
        assert_eq!(v, 2.5);
        assert_eq!(esd_params_get(p, key("nmax").as_ptr(), &mut v), EsdStatus::Ok);
        assert_eq!(v, 8.0);
        assert_eq!(esd_params_get(p, key("zeta1").as_ptr(), &mut v), EsdStatus::Ok);
        assert_eq!(v, 1.0);

        assert_eq!(esd_params_set(p, key("kappa").as_ptr(), 1.0), EsdStatus::UnknownKey);
        assert!(last_error().contains("kappa"));
        assert_eq!(esd_params_set(p, key("n0").as_ptr(), 1.5), EsdStatus::InvalidArgument);
        esd_params_free(p);
    }
}

#[test]
fn null_arguments_are_reported() {
    unsafe {
        assert_eq!(esd_params_set(ptr::null_mut(), key("beta1").as_ptr(), 1.0), EsdStatus::NullPointer);
        let p = esd_params_new();
        assert_eq!(esd_params_set(p, ptr::null(), 1.0), EsdStatus::NullPointer);
        assert_eq!(esd_params_get(p, key("beta1").as_ptr(), ptr::null_mut()), EsdStatus::NullPointer);
        assert_eq!(esd_evolve(p, 1.0, 10, ptr::null_mut()), EsdStatus::NullPointer);
        let mut out = 0.0;
        assert_eq!(esd_negativity(ptr::null(), &mut out), EsdStatus::NullPointer);
        assert_eq!(esd_series_len(ptr::null()), 0);
        assert_eq!(esd_sweep_len(ptr::null()), 0);
        // freeing null is a no-op
        esd_series_free(ptr::null_mut());
        esd_sweep_free(ptr::null_mut());
        esd_params_free(ptr::null_mut());
        esd_params_free(p);
    }
}

#[test]
fn evolve_matches_analytic_benchmark() {
    let p = esd_params_new();
    let mut series = ptr::null_mut();
    unsafe {
        assert_eq!(esd_evolve(p, std::f64::consts::PI, 201, &mut series), EsdStatus::Ok);
        assert_eq!(esd_series_len(series), 201);
        let mut rec = EsdRecord::default();
        for k in 0..201 {
            assert_eq!(esd_series_get(series, k, &mut rec), EsdStatus::Ok);
            let want = (2f64.sqrt() - 1.0) * (2.0 * rec.scaled_time).sin().powi(2) / 2.0;
            assert!((rec.negativity - want).abs() < 1e-9);
            assert!(rec.trace_error < 1e-12);
        }
        assert_eq!(esd_series_get(series, 201, &mut rec), EsdStatus::OutOfRange);

        let times = [0.0, 0.5, std::f64::consts::FRAC_PI_4];
        let mut oracle = [0.0; 3];
        assert_eq!(esd_oracle_negativity(p, times.as_ptr(), 3, oracle.as_mut_ptr()), EsdStatus::Ok);
        assert!((oracle[2] - (2f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);

        esd_series_free(series);
        esd_params_free(p);
    }
}

#[test]
fn evolve_rejects_bad_arguments() {
    let p = esd_params_new();
    let mut series = ptr::null_mut();
    unsafe {
        assert_eq!(esd_evolve(p, -1.0, 10, &mut series), EsdStatus::InvalidArgument);
        assert!(series.is_null());
        assert_eq!(esd_params_set(p, key("gamma").as_ptr(), -0.5), EsdStatus::Ok);
        assert_ne!(esd_evolve(p, 1.0, 10, &mut series), EsdStatus::Ok);
        assert!(series.is_null());
        assert!(!last_error().is_empty());
        esd_params_free(p);
    }
}

#[test]
fn measures_on_bell_and_product_states() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = pure_state([0.0, h, h, 0.0]);
    let product = pure_state([0.0, 1.0, 0.0, 0.0]);
    let mut n = -1.0;
    let mut c = -1.0;
    unsafe {
        assert_eq!(esd_negativity(bell.as_ptr(), &mut n), EsdStatus::Ok);
        assert_eq!(esd_concurrence(bell.as_ptr(), &mut c), EsdStatus::Ok);
        assert!((n - 1.0).abs() < 1e-12 && (c - 1.0).abs() < 1e-12);
        assert_eq!(esd_negativity(product.as_ptr(), &mut n), EsdStatus::Ok);
        assert_eq!(esd_concurrence(product.as_ptr(), &mut c), EsdStatus::Ok);
        assert!(n.abs() < 1e-12 && c.abs() < 1e-12);

        let mut not_a_state = bell;
        not_a_state[0] = 3.0;
        assert_eq!(esd_negativity(not_a_state.as_ptr(), &mut n), EsdStatus::InvalidState);
    }
}

#[test]
fn figure_presets() {
    let mut sweep = ptr::null_mut();
    unsafe {
        assert_eq!(esd_figure(key("fig9").as_ptr(), 1, &mut sweep), EsdStatus::UnknownPreset);
        assert!(sweep.is_null());
        assert!(last_error().contains("fig9"));

        assert_eq!(esd_figure(key("fig3").as_ptr(), 2, &mut sweep), EsdStatus::Ok);
        assert_eq!(esd_sweep_len(sweep), 3 * 501);
        let mut row = EsdSweepRow::default();
        assert_eq!(esd_sweep_get(sweep, 501, &mut row), EsdStatus::Ok);
        assert_eq!(row.record.scaled_time, 0.0);
        assert_eq!((row.beta1, row.beta2, row.theta), (1.0, 1.0, std::f64::consts::FRAC_PI_2));
        assert_eq!(esd_sweep_get(sweep, 3 * 501, &mut row), EsdStatus::OutOfRange);
        esd_sweep_free(sweep);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/esd.h")).unwrap();
    for symbol in [
        "ESD_H",
        "typedef struct EsdParams EsdParams",
        "ESD_STATUS_UNKNOWN_PRESET",
        "esd_params_new",
        "esd_evolve",
        "esd_concurrence",
        "esd_figure",
        "esd_sweep_free",
        "EsdSweepRow",
    ] {
        assert!(header.contains(symbol), "header lacks {symbol}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/esd.h");
    let status = match std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c", header])
        .status()
    {
        Ok(s) => s,
        // no C compiler on this machine
        Err(_) => return,
    };
    assert!(status.success());
}
