//! Named, configurable runs that write CSV tables and a JSON manifest.

mod config;
mod convergence;
mod dispersion;
mod fig1;
mod output;
mod packet;
mod planck;
mod regime;

pub use config::{PacketForm, RawConfig, ScenarioConfig, ScenarioName};
pub use convergence::{convergence_study, max_error, validate_dts, ConvergenceStudy};
pub use dispersion::{dispersion_scan, measure_mode, DispersionRow, DispersionSettings, ModeStatus};
pub use fig1::{fig1_series, horizon_label, sampling, Fig1Row, Fig1Series};
pub use output::{format_real, Cell, OutputFile, OutputSink, RunManifest, MANIFEST_FILE};
pub use packet::{packet_coefficients, reference_width, run_packet, PacketRun, PacketSettings};
pub use planck::{report_planck_numbers, PlanckReport, TIME_RESOLUTION};
pub use regime::{regime_compare, regime_label, RegimeRow, RegimeSettings};

use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::constants::{derive_scales, PhysicalConstants};
use crate::error::Result;

/// What a finished run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub manifest: RunManifest,
}

/// `(name, description)` for every scenario.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    ScenarioName::ALL.iter().map(|s| (s.as_str(), s.description())).collect()
}

struct Recorder {
    solver: Map<String, Value>,
    results: Map<String, Value>,
    notes: Vec<String>,
    plot: Vec<String>,
}

impl Recorder {
    fn solver(&mut self, key: &str, value: Value) {
        self.solver.insert(key.to_string(), value);
    }

    fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }
}

/// Runs a scenario, writes its tables (and plot script if requested) and then
/// the manifest.
pub fn run(config: &ScenarioConfig) -> Result<RunSummary> {
    let start = Instant::now();
    let constants = PhysicalConstants::<f64>::codata();
    let derived = derive_scales(&constants)?;
    let mut sink = OutputSink::create(&config.output_dir)?;
    let mut rec = Recorder {
        solver: Map::new(),
        results: Map::new(),
        notes: Vec::new(),
        plot: Vec::new(),
    };
    let p = &config.params;
    let prefix = config.scenario.as_str();

    match config.scenario {
        ScenarioName::Fig1 => {
            let amplitude = p.amplitude.unwrap_or(1.0);
            let spp = p.samples_per_period.unwrap_or(fig1::DEFAULT_SAMPLES_PER_PERIOD);
            let dt = p.dt.unwrap_or(fig1::DEFAULT_DT);
            let horizons = match p.horizon_tau {
                Some(h) => vec![h],
                None => fig1::DEFAULT_HORIZONS.to_vec(),
            };
            rec.solver("method", json!("rk4"));
            rec.solver("samples_per_period", json!(spp));
            for h in horizons {
                let series = fig1_series(amplitude, h, spp, dt)?;
                let label = horizon_label(h);
                let file = format!("{prefix}_{label}.csv");
                sink.write_csv(
                    &file,
                    &fig1::FIG1_HEADER,
                    series.rows.iter().map(|r| {
                        vec![
                            Cell::from(r.t),
                            r.analytic.re.into(),
                            r.analytic.im.into(),
                            r.analytic.norm().into(),
                            r.numeric.re.into(),
                            r.numeric.im.into(),
                            r.numeric.norm().into(),
                        ]
                    }),
                )?;
                rec.solver(&format!("dt_{label}"), json!(series.dt));
                rec.solver(&format!("stride_{label}"), json!(series.stride));
                rec.result(
                    &label,
                    json!({
                        "max_deviation": series.max_deviation,
                        "re_min": series.re_min,
                        "re_max": series.re_max,
                        "period_tau": series.period,
                        "complete_periods": series.complete_periods,
                    }),
                );
                rec.plot.push(format!(
                    "set title 'Re psi, t in (0, {h}) tau'\nset xlabel 't / tau'\nset ylabel 'Re psi'\nplot '{file}' using 1:5 with lines title 'RK4', '{file}' using 1:2 with points pt 7 ps 0.3 title 'analytic'\n"
                ));
            }
            rec.notes.push("period of Re psi is pi tau (angular frequency 2/tau)".into());
        }
        ScenarioName::Convergence => {
            let dts = p.dts.clone().unwrap_or_else(|| convergence::DEFAULT_DTS.to_vec());
            let amplitude = p.amplitude.unwrap_or(1.0);
            let horizon = p.horizon_tau.unwrap_or(convergence::DEFAULT_HORIZON);
            let study = convergence_study(&dts, amplitude, horizon)?;
            let file = format!("{prefix}_errors.csv");
            sink.write_csv(
                &file,
                &["dt", "max_error"],
                study.errors.iter().map(|&(h, e)| vec![Cell::from(h), e.into()]),
            )?;
            rec.solver("method", json!("rk4"));
            rec.solver("horizon_tau", json!(horizon));
            rec.result("order", json!(study.order));
            rec.result("errors", json!(study.errors));
            rec.plot.push(format!(
                "set logscale xy\nset xlabel 'dt'\nset ylabel 'max error'\nplot '{file}' using 1:2 with linespoints title 'RK4'\n"
            ));
        }
        ScenarioName::DispersionScan => {
            let d = DispersionSettings::default();
            let settings = DispersionSettings {
                k_values: p.k_values.clone().unwrap_or(d.k_values),
                r: p.r.unwrap_or(d.r),
                v: p.v.unwrap_or(d.v),
                n: p.n.unwrap_or(d.n),
                length: p.length.unwrap_or(d.length),
                laplacian: p.laplacian.unwrap_or(d.laplacian),
                safety: p.safety.unwrap_or(d.safety),
                dt: p.dt,
                override_unstable: p.override_unstable.unwrap_or(false),
            };
            let rows = dispersion_scan(&settings)?;
            let file = format!("{prefix}_table.csv");
            sink.write_csv(
                &file,
                &dispersion::DISPERSION_HEADER,
                rows.iter().map(|r| {
                    vec![
                        Cell::from(r.k_hat),
                        Cell::from(r.mode_number),
                        r.domain_length.into(),
                        r.omega_minus_analytic.into(),
                        r.omega_minus_measured.into(),
                        r.rel_err.into(),
                        r.growth_rate_analytic.into(),
                        r.growth_rate_measured.into(),
                        r.points_per_wavelength.into(),
                        r.dt.into(),
                        r.status.as_str().into(),
                    ]
                }),
            )?;
            rec.solver("method", json!("rk4 method of lines"));
            rec.solver("n", json!(settings.n));
            rec.solver("laplacian", json!(settings.laplacian));
            rec.solver("safety", json!(settings.safety));
            rec.solver("band_limit", json!("every step, |k| <= |k_m| + pi/L"));
            let worst = rows
                .iter()
                .filter(|r| r.status == ModeStatus::Ok)
                .map(|r| r.rel_err)
                .fold(0.0, f64::max);
            rec.result("max_rel_err_ok_rows", json!(worst));
            rec.result(
                "unresolved_rows",
                json!(rows.iter().filter(|r| r.status == ModeStatus::Unresolved).count()),
            );
            if rows.iter().any(|r| r.domain_length != settings.length) {
                rec.notes.push("domain length adjusted per row to fit an integer number of wavelengths".into());
            }
            rec.plot.push(format!(
                "set xlabel 'k'\nset ylabel 'omega'\nplot '{file}' using 1:4 with lines title 'analytic', '{file}' using 1:5 with points pt 7 title 'measured'\n"
            ));
        }
        ScenarioName::RegimeCompare => {
            let d = RegimeSettings::default();
            let settings = RegimeSettings {
                mass_ratios: p.mass_ratios.clone().unwrap_or(d.mass_ratios),
                v: p.v.unwrap_or(d.v),
                amplitude: p.amplitude.unwrap_or(d.amplitude),
                horizon: p.horizon_tau.unwrap_or(d.horizon),
                n: p.n.unwrap_or(d.n),
                length: p.length.unwrap_or(d.length),
                sigma: p.sigma.unwrap_or(d.sigma),
                laplacian: p.laplacian.unwrap_or(d.laplacian),
                safety: p.safety.unwrap_or(d.safety),
                dt: p.dt,
                override_unstable: p.override_unstable.unwrap_or(false),
            };
            let rows = regime_compare(&settings)?;
            let file = format!("{prefix}_distances.csv");
            sink.write_csv(
                &file,
                &regime::REGIME_HEADER,
                rows.iter().map(|r| {
                    vec![
                        Cell::from(r.r),
                        r.uniform_distance.into(),
                        r.packet_distance.into(),
                        r.regime.into(),
                        r.dt.into(),
                    ]
                }),
            )?;
            rec.solver("method", json!("rk4 method of lines"));
            rec.solver("n", json!(settings.n));
            rec.solver("laplacian", json!(settings.laplacian));
            rec.solver("horizon_tau", json!(settings.horizon));
            rec.notes.push("uniform data (psi, psi_t) = (0, 2iA); packet data psi_t = -i v psi; both forms share dt and band limit".into());
            rec.result(
                "packet_distance",
                json!(rows.iter().map(|r| (r.r, r.packet_distance)).collect::<Vec<_>>()),
            );
            rec.plot.push(format!(
                "set logscale xy\nset xlabel 'r = M_P/m'\nset ylabel 'sup |psi_full - psi_macro|'\nplot '{file}' using 1:3 with linespoints title 'packet'\n"
            ));
        }
        ScenarioName::PdePacket => {
            let d = PacketSettings::default();
            let settings = PacketSettings {
                form: p.form.unwrap_or(d.form),
                r: p.r.unwrap_or(d.r),
                v: p.v.unwrap_or(d.v),
                n: p.n.unwrap_or(d.n),
                length: p.length.unwrap_or(d.length),
                sigma: p.sigma.unwrap_or(d.sigma),
                k0: p.k0.unwrap_or(d.k0),
                horizon: p.horizon_tau.unwrap_or(d.horizon),
                laplacian: p.laplacian.unwrap_or(d.laplacian),
                safety: p.safety.unwrap_or(d.safety),
                dt: p.dt,
                override_unstable: p.override_unstable.unwrap_or(false),
            };
            let run = run_packet(&settings)?;
            let diag = format!("{prefix}_diagnostics.csv");
            sink.write_csv(
                &diag,
                &packet::DIAGNOSTICS_HEADER,
                run.snapshots.iter().map(|s| {
                    vec![
                        Cell::from(s.time),
                        s.l2_norm.into(),
                        s.max_abs.into(),
                        s.state.psi.rms_width().into(),
                        s.state.psi.mean_position().into(),
                        reference_width(&settings, &run.coeffs, s.time).into(),
                    ]
                }),
            )?;
            let last = run.snapshots.last().expect("evolve returns the initial state");
            let fin = format!("{prefix}_final.csv");
            sink.write_csv(
                &fin,
                &packet::FINAL_HEADER,
                run.grid
                    .positions()
                    .into_iter()
                    .zip(last.state.psi.values())
                    .map(|(x, z)| vec![Cell::from(x), z.re.into(), z.im.into(), z.norm().into()]),
            )?;
            rec.solver("method", json!("rk4 method of lines"));
            rec.solver("dt", json!(run.dt));
            rec.solver("snapshot_stride", json!(run.stride));
            rec.solver("n", json!(settings.n));
            rec.solver("laplacian", json!(settings.laplacian));
            rec.solver("k_cut", json!(run.k_cut));
            rec.solver(
                "coefficients",
                json!({"a_xx": run.coeffs.a_xx, "a_tt": run.coeffs.a_tt, "v": run.coeffs.v}),
            );
            let first = &run.snapshots[0];
            rec.result("final_time", json!(last.time));
            rec.result("norm_drift", json!((last.l2_norm - first.l2_norm) / first.l2_norm));
            rec.result("max_abs", json!(run.snapshots.iter().map(|s| s.max_abs).fold(0.0, f64::max)));
            rec.result("final_width", json!(last.state.psi.rms_width()));
            rec.notes.push("initial psi_t = i (a_xx/2) lap(psi) - i v psi, the slow-branch velocity".into());
            if run.k_cut.is_some() {
                rec.notes.push("state projected onto |k| <= k_cut after every step".into());
            }
            rec.plot.push(format!(
                "set xlabel 't / tau'\nset ylabel 'width'\nplot '{diag}' using 1:4 with lines title 'measured', '{diag}' using 1:6 with lines title 'free Schrodinger'\n"
            ));
            rec.plot.push(format!(
                "set xlabel 'x'\nset ylabel '|psi|'\nplot '{fin}' using 1:4 with lines title 'final'\n"
            ));
        }
    }

    if config.plotscript {
        let mut script = String::from("set terminal pngcairo size 900,600\n");
        for (j, block) in rec.plot.iter().enumerate() {
            script.push_str(&format!("set output '{prefix}_{j}.png'\nunset logscale\n{block}"));
        }
        sink.write_text(&format!("{prefix}_plot.gp"), &script)?;
    }

    let manifest = RunManifest {
        scenario: prefix.to_string(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        config: serde_json::to_value(&config.params)?,
        constants,
        derived_scales: derived,
        solver: rec.solver,
        results: rec.results,
        notes: rec.notes,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs: sink.files().to_vec(),
    };
    manifest.write(sink.dir())?;
    Ok(RunSummary {
        output_dir: sink.dir().to_path_buf(),
        manifest,
    })
}
