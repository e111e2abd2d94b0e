use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nsb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsb")).args(args).output().unwrap()
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut full = vec!["run"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", dir.to_str().unwrap()]);
    nsb(&full)
}

#[test]
fn list_names_every_scenario() {
    let out = nsb(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["fig1", "dispersion_scan", "regime_compare", "convergence", "pde_packet"] {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn planck_report_text_and_json() {
    let out = nsb(&["report", "planck"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("GeV"));
    let out = nsb(&["report", "planck", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let e = v["energy_gev"].as_f64().unwrap();
    assert!((1e19..1e20).contains(&e));
}

#[test]
fn fig1_run_writes_tables_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["fig1", "--set", "horizon_tau=10", "--plotscript"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("fig1_h10.csv")).unwrap();
    assert!(csv.starts_with("t_over_tau,"));
    assert!(!csv.contains('\r'));
    assert!(dir.path().join("fig1_plot.gp").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["scenario"], "fig1");
    assert_eq!(manifest["config"]["horizon_tau"], 10.0);
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "scenario = \"convergence\"\ndts = [0.04, 0.02, 0.01]\nhorizon_tau = 5\n").unwrap();
    let out = run_in(&dir.path().join("o"), &["convergence", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("o/convergence_errors.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["nope"]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["fig1", "--set", "bogus=1"]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["fig1", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["dispersion_scan", "--set", "k_values=[2.0]"]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["pde_packet", "--set", "n=100"]).status.code(), Some(2));
}

#[test]
fn blow_up_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "pde_packet", "--set", "v=2", "--set", "override_unstable=true", "--set", "horizon_tau=200",
            "--set", "n=32", "--set", "L=64",
        ],
    );
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blow-up"));
}
