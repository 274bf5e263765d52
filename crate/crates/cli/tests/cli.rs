use std::path::Path;
use std::process::{Command, Output};

use qcorr_cli::band::{cmd_band, BandScan};
use qcorr_cli::grid::SweepGrid;
use qcorr_cli::point::cmd_point;
use qcorr_cli::sweep::{cmd_sweep, Status, SweepOptions};
use qcorr_cli::MethodChoice;
use qcorr::{Method, ModelParams};

fn qcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcorr")).args(args).output().expect("binary runs")
}

fn qcorr_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcorr")).args(args).env(key, value).output().expect("binary runs")
}

fn strong() -> ModelParams {
    ModelParams::new(10.0, 4.0, 0.0, 0.5, 500.0, 0.5)
}

#[test]
fn point_inside_band_is_entangled() {
    let out = cmd_point(&strong(), MethodChoice::Analytic).unwrap();
    assert!(out.results[0].measures.log_negativity > 0.0);
}

#[test]
fn point_both_methods_agree() {
    let out = cmd_point(&strong(), MethodChoice::Both).unwrap();
    assert_eq!(out.results.len(), 2);
    assert!(out.log_negativity_difference.unwrap() < 1e-7);
    let run = qcorr(&["point", "--omega2", "4", "--method", "both"]);
    assert!(run.status.success());
    assert!(String::from_utf8_lossy(&run.stdout).contains("analytic vs quadrature"));
}

#[test]
fn resonant_point_is_bad_input() {
    let run = qcorr(&["point", "--omega2", "10"]);
    assert_eq!(run.status.code(), Some(2));
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("\"error\":\"ResonantParams\""), "{err}");
}

#[test]
fn malformed_flags_are_bad_input() {
    assert_eq!(qcorr(&["sweep", "--grid", "k:0:1"]).status.code(), Some(2));
    assert_eq!(qcorr(&["sweep", "--grid", "k:0:10:3", "--gamma", "-1"]).status.code(), Some(2));
    assert_eq!(qcorr(&["point", "--config", "/nonexistent/qcorr.conf"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exit_code() {
    // no dissipation leaves undamped modes
    let run = qcorr(&["point", "--gamma", "0"]);
    assert_eq!(run.status.code(), Some(3));
}

#[test]
fn trivial_grid_both_methods_agree() {
    let grid = SweepGrid::new("k:0:10:2".parse().unwrap(), Some("omega2:2:4:2".parse().unwrap()), strong(), MethodChoice::Both).unwrap();
    let out = cmd_sweep(&grid, &SweepOptions::default()).unwrap();
    assert_eq!(out.records.len(), 8);
    for pair in out.records.chunks(2) {
        assert_eq!((pair[0].method, pair[1].method), ("analytic", "quadrature"));
        let (a, q) = (pair[0].measures.unwrap(), pair[1].measures.unwrap());
        for (x, y) in a.values().iter().zip(q.values()) {
            assert!((x - y).abs() < 1e-7);
        }
    }
}

#[test]
fn resonant_grid_points_are_skipped_not_fatal() {
    let grid = SweepGrid::new("omega2:9:10:3".parse().unwrap(), None, strong(), MethodChoice::Analytic).unwrap();
    let out = cmd_sweep(&grid, &SweepOptions::default()).unwrap();
    assert_eq!(out.records.len(), 3);
    assert_eq!(out.records[2].status, Status::SkippedResonant);
    assert!(out.check_failures().is_ok());
}

#[test]
fn mostly_failing_sweep_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fail.csv");
    let run = qcorr(&["sweep", "--grid", "gamma:0:1e-12:3", "--out", path.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(3));
    // rows are still written
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with(",failed")).count(), 3);
}

fn data_rows(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
}

#[test]
fn sweep_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (name, workers) in [("a.csv", "1"), ("b.csv", "1"), ("c.csv", "4")] {
        let path = dir.path().join(name);
        let run = qcorr(&[
            "sweep", "--grid", "k:0:40:7", "--grid", "omega2:0.5:9.5:6", "--workers", workers, "--seed", "9", "--out",
            path.to_str().unwrap(),
        ]);
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let text = data_rows(&dir.path().join("a.csv"));
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "axis1,axis2,E_N,discord2,nu_tilde_minus,nu_minus,nu_plus,mu,mu1,mu2,eta_plus_var,eta_minus_var,pi_plus_var,pi_minus_var,method,status"
    );
    assert_eq!(lines.count(), 42);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# strong dissipation\ngamma = 0.5\nomega2 = 4\ntemp = 100\nformat = json\n").unwrap();
    let hot = qcorr(&["point", "--config", conf.to_str().unwrap()]);
    let cold = qcorr(&["point", "--config", conf.to_str().unwrap(), "--temp", "0.5"]);
    let e_n = |o: &Output| -> f64 {
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["results"][0]["E_N"].as_f64().unwrap()
    };
    assert_eq!(e_n(&hot), 0.0);
    assert!(e_n(&cold) > 0.0);
}

#[test]
fn json_sweep_output() {
    let run = qcorr(&["sweep", "--grid", "omega2:2:4:3", "--format", "json"]);
    assert!(run.status.success());
    let v: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    assert_eq!(records[0]["status"], "ok");
    assert!(records[0]["E_N"].as_f64().unwrap() > 0.0);
    assert_eq!(v["axis1"], "omega2");
}

#[test]
fn band_found_and_empty() {
    let band = cmd_band(&strong(), &BandScan::around(10.0), 1e-4, Method::Analytic).unwrap();
    let b = band.band().expect("band at low temperature");
    assert!(b.omega_prime < b.omega_double_prime);
    let e = |w: f64| qcorr_cli::evaluate(&strong().with_omega2(w), Method::Analytic).unwrap().log_negativity;
    assert!(e(0.5 * (b.omega_prime + b.omega_double_prime)) > 0.0);
    assert_eq!(e(b.omega_prime - 10.0 * 1e-4), 0.0);
    assert_eq!(e(b.omega_double_prime + 10.0 * 1e-4), 0.0);
    assert!(b.tolerance <= 1e-4);
    assert!(!b.truncated);

    let hot = cmd_band(&strong().with_temperature(100.0), &BandScan::around(10.0), 1e-4, Method::Analytic).unwrap();
    assert!(hot.band().is_none());
    let run = qcorr(&["band", "--temp", "100"]);
    assert_eq!(run.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&run.stdout).contains("empty"));
}

#[test]
fn band_widens_with_dissipation() {
    let scan = BandScan::around(10.0);
    let base = cmd_band(&strong(), &scan, 1e-4, Method::Analytic).unwrap();
    let stronger = cmd_band(&strong().with_gamma(0.8), &scan, 1e-4, Method::Analytic).unwrap();
    assert!(stronger.width() > base.width());
}

#[test]
fn validate_default_passes_and_override_fails() {
    let ok = qcorr(&["validate", "--cases", "5", "--seed", "2"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let empty = qcorr(&["validate", "--cases", "0"]);
    assert_eq!(empty.status.code(), Some(0));
    let forced = qcorr_env(&["validate", "--cases", "5"], "QCORR_TOL_OVERRIDES", "discord_abs=0,covariance_rel=1e-30,covariance_abs=1e-30");
    assert_eq!(forced.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&forced.stdout).contains("FAIL"));
}
