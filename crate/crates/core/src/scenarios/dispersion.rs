//! Single-mode PDE runs compared with the analytic dispersion branches.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::analytic::CanonicalCoefficients;
use crate::error::{Error, Result};
use crate::pde::{
    evolve, fit_mode, stability_dt, BandLimit, ComplexField, FieldState, Grid, LaplacianKind,
    ModeFit, PdeProblem,
};
use crate::C64;

/// Cap on the measurement window for very slow modes, in Planck times.
pub const MAX_HORIZON: f64 = 2.0e4;
/// Window for a mode with zero slow frequency.
pub const STATIC_HORIZON: f64 = 100.0;
/// Slow periods per stable measurement.
pub const PERIODS: f64 = 10.0;
/// e-folds of growth per unstable measurement.
pub const GROWTH_EFOLDS: f64 = 8.0;
/// Fewer points per wavelength than this flags a row as unresolved.
pub const MIN_POINTS_PER_WAVELENGTH: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionSettings {
    pub k_values: Vec<f64>,
    pub r: f64,
    pub v: f64,
    pub n: usize,
    pub length: f64,
    pub laplacian: LaplacianKind,
    pub safety: f64,
    pub dt: Option<f64>,
    pub override_unstable: bool,
}

impl Default for DispersionSettings {
    fn default() -> Self {
        Self {
            k_values: vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
            r: 1.0,
            v: 0.0,
            n: 256,
            length: 64.0,
            laplacian: LaplacianKind::Spectral,
            safety: 0.5,
            dt: None,
            override_unstable: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeStatus {
    Ok,
    Unresolved,
    Unstable,
}

impl ModeStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModeStatus::Ok => "ok",
            ModeStatus::Unresolved => "unresolved",
            ModeStatus::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionRow {
    pub k_hat: f64,
    /// Mode number on the adjusted domain.
    pub mode_number: i64,
    /// Domain length holding an integer number of wavelengths of `k_hat`.
    pub domain_length: f64,
    /// Real part of the slow branch.
    pub omega_minus_analytic: f64,
    pub omega_minus_measured: f64,
    /// Relative error, or absolute error when the analytic value is zero.
    pub rel_err: f64,
    /// `Im omega_plus`, zero for stable modes.
    pub growth_rate_analytic: f64,
    pub growth_rate_measured: f64,
    pub points_per_wavelength: f64,
    pub dt: f64,
    pub status: ModeStatus,
}

pub const DISPERSION_HEADER: [&str; 11] = [
    "k_hat",
    "mode_number",
    "domain_length",
    "omega_minus_analytic",
    "omega_minus_measured",
    "rel_err",
    "growth_rate_analytic",
    "growth_rate_measured",
    "points_per_wavelength",
    "dt",
    "status",
];

fn coefficients(settings: &DispersionSettings) -> Result<CanonicalCoefficients<f64>> {
    CanonicalCoefficients::new(settings.r, 1.0, settings.v)
        .map_err(|e| Error::Config(e.to_string()))
}

pub fn dispersion_scan(settings: &DispersionSettings) -> Result<Vec<DispersionRow>> {
    let coeffs = coefficients(settings)?;
    if !settings.override_unstable {
        let crit = coeffs.critical_wavenumber();
        if let Some(k) = settings
            .k_values
            .iter()
            .find(|k| crit.is_some_and(|c| k.abs() >= c))
        {
            return Err(Error::Config(format!(
                "k_hat = {k} is not below the critical wavenumber {}; set override_unstable = true to measure growth",
                crit.unwrap_or(f64::NAN)
            )));
        }
    }
    if settings.k_values.iter().any(|k| !k.is_finite()) {
        return Err(Error::Config("k_values must be finite".into()));
    }
    Grid::new(settings.n, settings.length).map_err(|e| Error::Config(e.to_string()))?;
    settings
        .k_values
        .par_iter()
        .map(|&k| scan_row(settings, &coeffs, k))
        .collect()
}

fn scan_row(settings: &DispersionSettings, coeffs: &CanonicalCoefficients<f64>, k: f64) -> Result<DispersionRow> {
    let (m, length) = if k == 0.0 {
        (0, settings.length)
    } else {
        let cycles = (k.abs() * settings.length / TAU).round().max(1.0);
        ((cycles as i64) * k.signum() as i64, TAU * cycles / k.abs())
    };
    let freqs = coeffs.mode_frequencies(k * k);
    let fast = freqs.fast.expect("full form has two branches");
    let unstable = fast.im > 0.0;
    let omega_analytic = freqs.slow.re;
    let growth_analytic = fast.im.max(0.0);
    let ppw = if m == 0 {
        f64::INFINITY
    } else {
        settings.n as f64 / m.unsigned_abs() as f64
    };

    let mut row = DispersionRow {
        k_hat: k,
        mode_number: m,
        domain_length: length,
        omega_minus_analytic: omega_analytic,
        omega_minus_measured: f64::NAN,
        rel_err: f64::NAN,
        growth_rate_analytic: growth_analytic,
        growth_rate_measured: f64::NAN,
        points_per_wavelength: ppw,
        dt: f64::NAN,
        status: if unstable {
            ModeStatus::Unstable
        } else if ppw < MIN_POINTS_PER_WAVELENGTH {
            ModeStatus::Unresolved
        } else {
            ModeStatus::Ok
        },
    };
    if m.unsigned_abs() as usize > settings.n / 2 {
        row.status = ModeStatus::Unresolved;
        return Ok(row);
    }

    let grid = Grid::new(settings.n, length)?;
    let branch = if unstable { fast } else { freqs.slow };
    let horizon = if unstable {
        GROWTH_EFOLDS / fast.im
    } else if freqs.slow.re.abs() > 1e-12 {
        (PERIODS * TAU / freqs.slow.re.abs()).min(MAX_HORIZON)
    } else {
        STATIC_HORIZON
    };
    let dt = match settings.dt {
        Some(dt) => dt,
        None => stability_dt(coeffs, &grid, settings.laplacian, settings.safety)?.dt,
    };
    let (fit, dt) = measure_mode(coeffs, grid, m, branch, horizon, settings.laplacian, dt, unstable)?;

    row.dt = dt;
    row.omega_minus_measured = fit.frequency;
    row.growth_rate_measured = fit.growth_rate;
    row.rel_err = if omega_analytic == 0.0 {
        (fit.frequency - omega_analytic).abs()
    } else {
        ((fit.frequency - omega_analytic) / omega_analytic).abs()
    };
    Ok(row)
}

/// Evolves `exp(i k_m x)` started on the branch with frequency `omega` and fits
/// the frequency and growth rate of mode `m`. Every other mode is projected out
/// after each step.
#[allow(clippy::too_many_arguments)]
pub fn measure_mode(
    coeffs: &CanonicalCoefficients<f64>,
    grid: Grid<f64>,
    m: i64,
    omega: C64,
    horizon: f64,
    laplacian: LaplacianKind,
    dt: f64,
    allow_unstable: bool,
) -> Result<(ModeFit<f64>, f64)> {
    let psi = ComplexField::plane_wave(grid, m);
    let dpsi = psi.scale(C64::new(0.0, -1.0) * omega);
    let spacing = (horizon / 400.0).min(0.5);
    let stride = ((spacing / dt).floor() as usize).max(1);
    let k_cut = grid.wavenumber(grid.bin(m)).abs() + PI / grid.length();
    let problem = PdeProblem {
        coeffs: *coeffs,
        grid,
        initial: FieldState::new(psi, dpsi)?,
        t_end: horizon,
        dt,
        laplacian,
        band_limit: BandLimit::EveryStep(k_cut),
        snapshot_stride: stride,
        allow_unstable,
        spectral_diagnostics: true,
    };
    let snapshots = evolve(&problem)?;
    Ok((fit_mode(&snapshots, m)?, dt))
}
