//! End-to-end checks of the experiment drivers: file outputs, the
//! byte-level determinism contract, and the exit-code mapping.

use std::fs;

use fracwave::cli::{cmd_quadcheck, cmd_simulate, cmd_spectrum, exit_code, RunConfig};
use fracwave::Error;

fn short_run_config() -> RunConfig {
    RunConfig::parse(
        "n_cells = 48\nn_xi = 80\ndt = 2e-3\nt_final = 1.0\ncadence = 20\n\
         fit_t1 = 0.25\nfit_t2 = 1.0\n",
    )
    .unwrap()
}

#[test]
fn simulate_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_run_config();
    cmd_simulate(&cfg, dir.path(), 1).unwrap();
    for f in [
        "trace.csv",
        "state_initial.csv",
        "state_final.csv",
        "channels_final.csv",
        "manifest.json",
    ] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("t,energy,dissipation,residual\n"));
    let manifest = fs::read_to_string(dir.path().join("manifest.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(parsed["command"], "simulate");
    assert_eq!(parsed["config"]["n_cells"], 48);
    assert!(parsed["grid"]["n_nodes"].as_u64().unwrap() == 80);
}

#[test]
fn identical_config_and_seed_give_identical_bytes() {
    let cfg = short_run_config();
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    cmd_simulate(&cfg, d1.path(), 42).unwrap();
    cmd_simulate(&cfg, d2.path(), 42).unwrap();
    for f in ["trace.csv", "state_final.csv", "channels_final.csv"] {
        let a = fs::read(d1.path().join(f)).unwrap();
        let b = fs::read(d2.path().join(f)).unwrap();
        assert_eq!(a, b, "{f} differs between identical runs");
    }
}

#[test]
fn spectrum_emits_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::parse(
        "n_cells = 128\nn_xi = 80\nscan_n_min = 10\nscan_n_max = 12\n\
         resolvent_n_min = 10\nresolvent_n_max = 14\nbranches = 1\n",
    )
    .unwrap();
    cmd_spectrum(&cfg, dir.path(), 3).unwrap();
    let eigs = fs::read_to_string(dir.path().join("eigs.csv")).unwrap();
    assert!(eigs.starts_with("n,branch,re_num,im_num,re_asym,im_asym,gap\n"));
    assert_eq!(eigs.lines().count(), 1 + 3);
    let res = fs::read_to_string(dir.path().join("resolvent.csv")).unwrap();
    assert!(res.starts_with("lambda,resolvent_norm\n"));
    assert_eq!(res.lines().count(), 1 + 5);
    // every scanned eigenvalue is strictly damped for eta > 0
    for line in eigs.lines().skip(1) {
        let re: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(re < 0.0, "eigenvalue with Re = {re}");
    }
}

#[test]
fn quadcheck_passes_at_default_resolution_and_fails_coarse() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::parse("grid_tol = 1e-8\n").unwrap();
    cmd_quadcheck(&cfg, dir.path(), 0).unwrap();

    let coarse = RunConfig::parse("n_xi = 8\n").unwrap();
    let err = cmd_quadcheck(&coarse, dir.path(), 0).unwrap_err();
    assert!(matches!(err, Error::Numerical(_)));
    assert_eq!(exit_code(&err), 2);
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(exit_code(&Error::Config("x".into())), 1);
    assert_eq!(exit_code(&Error::Domain("x".into())), 1);
    assert_eq!(exit_code(&Error::SingularCase("x".into())), 1);
    assert_eq!(exit_code(&Error::Numerical("x".into())), 2);
    assert_eq!(
        exit_code(&Error::NearSpectrum { lambda: 1.0, detail: "x".into() }),
        2
    );
}

#[test]
fn config_rejects_singular_resolvent_request() {
    // eta = 0 with a lambda = 0 sample is refused up front
    let r = RunConfig::parse("eta = 0\nresolvent_n_min = 0\n");
    assert!(r.is_err());
}

#[test]
fn binary_end_to_end_exit_codes_and_warning() {
    let exe = env!("CARGO_BIN_EXE_fracwave");
    let dir = tempfile::tempdir().unwrap();

    // valid short run with b above the admissible bound: succeeds and warns
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "n_cells = 32\nn_xi = 40\ndt = 5e-3\nt_final = 0.2\nb = 2.0\ncadence = 10\n",
    )
    .unwrap();
    let out = std::process::Command::new(exe)
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("sim"))
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("exceeds the admissible coupling bound"),
        "missing warning, stderr: {stderr}"
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("reference exponent -2/(1-alpha) = -4"));

    // unknown key: validation failure, exit code 1
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "alpa = 0.5\n").unwrap();
    let out = std::process::Command::new(exe)
        .args(["simulate", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // deliberately coarse channel grid: quadcheck exits 2
    let coarse = dir.path().join("coarse.cfg");
    fs::write(&coarse, "n_xi = 8\n").unwrap();
    let out = std::process::Command::new(exe)
        .args(["quadcheck", "--config"])
        .arg(&coarse)
        .arg("--out")
        .arg(dir.path().join("q"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_outputs_are_deterministic() {
    let cfg = RunConfig::parse(
        "n_cells = 96\nn_xi = 60\nn0 = 5\nscan_n_min = 8\nscan_n_max = 10\n\
         resolvent_n_min = 8\nresolvent_n_max = 10\nbranches = both\n",
    )
    .unwrap();
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    cmd_spectrum(&cfg, d1.path(), 5).unwrap();
    cmd_spectrum(&cfg, d2.path(), 5).unwrap();
    for f in ["eigs.csv", "resolvent.csv"] {
        let a = fs::read(d1.path().join(f)).unwrap();
        let b = fs::read(d2.path().join(f)).unwrap();
        assert_eq!(a, b, "{f} differs between identical runs");
    }
}
