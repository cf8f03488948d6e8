use std::path::Path;
use std::process::{Command, Output};

use esd_core::cli::{
    cmd_evolve, cmd_figure, cmd_selftest, format_float, parse_config, parse_float, CliError, SelftestOptions,
    EVOLVE_HEADER, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, EXIT_SELFTEST_FAILED, SWEEP_HEADER,
};
use esd_core::Error;

fn esd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esd")).args(args).env_remove("ESD_THREADS").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(header: &str, name: &str) -> usize {
    header.split(',').position(|c| c == name).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|x| parse_float(x).unwrap()).collect()).collect()
}

#[test]
fn evolve_reaches_analytic_peak() {
    let out = esd(&["evolve", "--tmax", "pi/4", "--samples", "2"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), EVOLVE_HEADER);
    let data = rows(&text);
    assert_eq!(data.len(), 2);
    let n = column(EVOLVE_HEADER, "negativity");
    assert_eq!(data[0][n], 0.0);
    assert!((data[1][n] - 0.20710678).abs() < 1e-8);
    assert_eq!(data[1][0], std::f64::consts::FRAC_PI_4);
}

#[test]
fn evolve_mixed_start_has_half_purity() {
    let text = stdout(&esd(&["evolve", "--theta", "pi/4", "--samples", "2", "--tmax", "1"]));
    assert!((rows(&text)[0][column(EVOLVE_HEADER, "purity")] - 0.5).abs() < 1e-15);
}

#[test]
fn csv_roundtrip_is_bit_exact() {
    let text = stdout(&esd(&["evolve", "--beta1", "3.3", "--gamma", "0.1", "--samples", "40"]));
    for line in text.lines().skip(1) {
        let rebuilt: Vec<String> = line.split(',').map(|x| format_float(parse_float(x).unwrap())).collect();
        assert_eq!(rebuilt.join(","), line);
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    std::fs::write(&config, "# trajectory\nbeta1 = 5\ngamma = 0.1  # per λ\nsamples = 3\n").unwrap();
    let config = config.to_str().unwrap();

    let from_file = rows(&stdout(&esd(&["evolve", "--config", config])));
    assert_eq!(from_file.len(), 3);
    assert_eq!(from_file[0][column(EVOLVE_HEADER, "beta1")], 5.0);
    assert_eq!(from_file[0][column(EVOLVE_HEADER, "gamma")], 0.1);

    let overridden = rows(&stdout(&esd(&["evolve", "--config", config, "--beta1", "2"])));
    assert_eq!(overridden[0][column(EVOLVE_HEADER, "beta1")], 2.0);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.csv");
    let out = esd(&["evolve", "--samples", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 5);
}

#[test]
fn sweep_emits_cartesian_rows() {
    let out = esd(&["sweep", "--beta1", "0,1", "--gamma", "0,0.1,0.7", "--samples", "3"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), SWEEP_HEADER);
    let data = rows(&text);
    assert_eq!(data.len(), 2 * 3 * 3);
    let (b, g) = (column(SWEEP_HEADER, "beta1"), column(SWEEP_HEADER, "gamma"));
    assert_eq!((data[0][b], data[0][g]), (0.0, 0.0));
    assert_eq!((data[3][b], data[3][g]), (0.0, 0.1));
    assert_eq!((data[17][b], data[17][g]), (1.0, 0.7));
}

#[test]
fn figure_output_has_preset_column() {
    let out = esd(&["figure", "fig2b", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), format!("preset,{SWEEP_HEADER}"));
    assert_eq!(text.lines().count(), 1 + 3 * 5);
    assert!(text.lines().skip(1).all(|l| l.starts_with("fig2b,")));
}

#[test]
fn fig1_has_41_curves_of_501_samples() {
    let mut buf = Vec::new();
    cmd_figure("fig1", "", &[], Some(4), &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 41 * 501);
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], i32, &str); 7] = [
        (&["figure", "fig9"], EXIT_CONFIG, "fig9"),
        (&["evolve", "--gamma", "-1"], EXIT_CONFIG, "gamma"),
        (&["evolve", "--theta", "abc"], EXIT_CONFIG, "theta"),
        (&["evolve", "--beta1", "0,1"], EXIT_CONFIG, "beta1"),
        (&["evolve", "--nmax", "2"], EXIT_CONFIG, "nmax"),
        (&["evolve", "--beta1", "1e308", "--samples", "3"], EXIT_NUMERICAL, "numerical"),
        (&["selftest", "--tolerance", "1e-15"], EXIT_SELFTEST_FAILED, "FAIL"),
    ];
    for (args, code, needle) in cases {
        let out = esd(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let all = format!("{}{}", stdout(&out), String::from_utf8_lossy(&out.stderr));
        assert!(all.contains(needle), "{args:?}: {all}");
    }
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "beta1 = 1\nkappa = 2\n").unwrap();
    let out = esd(&["evolve", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_CONFIG));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kappa"));
    assert_eq!(
        esd(&["evolve", "--config", Path::new("/nonexistent/x.cfg").to_str().unwrap()]).status.code(),
        Some(EXIT_CONFIG)
    );
}

#[test]
fn invalid_thread_count_is_a_config_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_esd"))
        .args(["figure", "fig3", "--samples", "2"])
        .env("ESD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_CONFIG));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ESD_THREADS"));
}

#[test]
fn evolve_output_is_deterministic() {
    let args = ["evolve", "--beta1", "2", "--gamma", "0.1", "--theta", "0.3", "--samples", "50"];
    assert_eq!(esd(&args).stdout, esd(&args).stdout);
}

#[test]
fn selftest_passes_and_reports() {
    let out = esd(&["selftest"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = stdout(&out);
    for check in
        ["kraus_vs_closed_form", "oracle_vs_full_space", "beta2_invariance", "xstate_shortcut", "analytic_benchmark"]
    {
        assert!(text.lines().any(|l| l.starts_with("PASS") && l.contains(check)), "{check} missing:\n{text}");
    }
    assert!(text.contains("fig3 gamma=0.7"));
}

#[test]
fn selftest_catches_hamiltonian_sign_flip() {
    let report = cmd_selftest(&SelftestOptions { flip_hamiltonian_sign: true, ..Default::default() });
    assert!(!report.passed());
    assert!(!report.check("kraus_vs_closed_form").unwrap().passed);
    assert!(report.check("analytic_benchmark").unwrap().passed);
}

#[test]
fn library_entry_points() {
    let config = parse_config("", &[("samples".into(), "2".into())]).unwrap();
    let mut buf = Vec::new();
    cmd_evolve(&config, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
    assert_eq!(CliError::from(Error::EmptySeries).exit_code(), EXIT_NUMERICAL);
    assert!(matches!(cmd_figure("fig9", "", &[], None, &mut Vec::new()), Err(CliError::UnknownPreset(_))));
}
