use std::fs;

use nsb_core::constants::PhysicalConstants;
use nsb_core::scenarios::{
    catalog, report_planck_numbers, run, ScenarioConfig, ScenarioName, MANIFEST_FILE,
};
use nsb_core::Error;

fn config(name: ScenarioName, overrides: &[&str], dir: &std::path::Path) -> ScenarioConfig {
    let overrides: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    ScenarioConfig::from_sources(name, None, &overrides, dir).unwrap()
}

fn read_csv(path: &std::path::Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r') && !text.contains('"'));
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    for row in &rows {
        assert_eq!(row.len(), header.len());
    }
    (header, rows)
}

#[test]
fn fig1_row_count_follows_sampling() {
    let dir = tempfile::tempdir().unwrap();
    run(&config(ScenarioName::Fig1, &[], dir.path())).unwrap();
    let (header, rows) = read_csv(&dir.path().join("fig1_h1000.csv"));
    assert_eq!(header[0], "t_over_tau");
    // samples every pi/20, the origin and the end point
    let expected = (1000.0 * 20.0 / std::f64::consts::PI).floor() as usize + 2;
    assert_eq!(rows.len(), expected);
    let first: Vec<f64> = rows[0].iter().map(|c| c.parse().unwrap()).collect();
    assert!(first.iter().all(|&x| x == 0.0));
    let last: f64 = rows.last().unwrap()[0].parse().unwrap();
    assert_eq!(last, 1000.0);
}

#[test]
fn empty_k_list_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run(&config(ScenarioName::DispersionScan, &["k_values=[]"], dir.path())).unwrap();
    let (header, rows) = read_csv(&dir.path().join("dispersion_scan_table.csv"));
    assert!(header.contains(&"omega_minus_measured".to_string()));
    assert!(rows.is_empty());
    assert_eq!(summary.manifest.outputs[0].rows, Some(0));
}

#[test]
fn manifest_lists_every_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(ScenarioName::PdePacket, &["n=64", "L=128", "horizon_tau=2"], dir.path());
    cfg.plotscript = true;
    let summary = run(&cfg).unwrap();
    let mut on_disk: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    on_disk.sort();
    let mut listed: Vec<String> = summary.manifest.outputs.iter().map(|f| f.file.clone()).collect();
    listed.push(MANIFEST_FILE.to_string());
    listed.sort();
    assert_eq!(on_disk, listed);
    let script = fs::read_to_string(dir.path().join("pde_packet_plot.gp")).unwrap();
    assert!(script.contains("pde_packet_diagnostics.csv"));
}

#[test]
fn regime_zero_ratio_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    run(&config(ScenarioName::RegimeCompare, &["mass_ratios=[0.01, 0]", "n=32", "L=32"], dir.path())).unwrap();
    let (_, rows) = read_csv(&dir.path().join("regime_compare_distances.csv"));
    assert_eq!(rows[1][2], "0.0000000000000000e0");
    assert_eq!(rows[1][3], "macroscopic");
}

#[test]
fn convergence_needs_three_halving_steps() {
    let dir = tempfile::tempdir().unwrap();
    for bad in ["dts=[0.004, 0.002]", "dts=[0.004, 0.003, 0.001]"] {
        let err = run(&config(ScenarioName::Convergence, &[bad], dir.path())).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert_eq!(err.exit_code(), 2);
    }
}

#[test]
fn seed_and_config_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run(&config(ScenarioName::Convergence, &["seed=9", "horizon_tau=1"], dir.path())).unwrap();
    assert_eq!(summary.manifest.seed, 9);
    assert_eq!(summary.manifest.config["horizon_tau"], 1.0);
    assert!(summary.manifest.results["order"].as_f64().is_some());
}

#[test]
fn natural_units_report() {
    let rep = report_planck_numbers(&PhysicalConstants::natural()).unwrap();
    assert_eq!(rep.scales.tau_p, 1.0);
    assert_eq!(rep.scales.energy_p, 1.0);
    assert_eq!(rep.scales.period, std::f64::consts::PI);
}

#[test]
fn catalog_matches_names() {
    let names: Vec<&str> = catalog().into_iter().map(|(n, _)| n).collect();
    assert_eq!(names, ScenarioName::ALL.map(|s| s.as_str()));
}

#[test]
fn bundled_configs_load() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ScenarioName::ALL {
        let path = root.join(format!("{name}.toml"));
        ScenarioConfig::load(name, Some(&path), &[], "out").unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
