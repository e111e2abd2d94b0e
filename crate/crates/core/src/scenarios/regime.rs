//! Distance between solutions of the full and the macroscopic equation as the
//! mass ratio `r = M_P / m` shrinks.

use rayon::prelude::*;

use crate::analytic::{classify_regime, CanonicalCoefficients, Regime, SpectralStability, DEFAULT_REGIME_THRESHOLD};
use crate::error::{Error, Result};
use crate::pde::{
    evolve, gaussian_packet, stability_dt, BandLimit, FieldState, Grid, LaplacianKind, PdeProblem,
};
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeSettings {
    pub mass_ratios: Vec<f64>,
    pub v: f64,
    pub amplitude: f64,
    pub horizon: f64,
    pub n: usize,
    pub length: f64,
    pub sigma: f64,
    pub laplacian: LaplacianKind,
    pub safety: f64,
    pub dt: Option<f64>,
    pub override_unstable: bool,
}

impl Default for RegimeSettings {
    fn default() -> Self {
        Self {
            mass_ratios: vec![1e-1, 1e-2, 1e-3],
            v: 0.0,
            amplitude: 1.0,
            horizon: 20.0,
            n: 128,
            length: 64.0,
            sigma: 2.0,
            laplacian: LaplacianKind::Stencil,
            safety: 0.5,
            dt: None,
            override_unstable: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeRow {
    pub r: f64,
    /// Sup over snapshots and grid of `|psi_full - psi_macro|` for uniform data.
    pub uniform_distance: f64,
    /// Same for a Gaussian packet.
    pub packet_distance: f64,
    pub regime: &'static str,
    pub dt: f64,
}

pub const REGIME_HEADER: [&str; 5] = ["r", "uniform_distance", "packet_distance", "regime", "dt"];

pub fn regime_label(r: f64) -> Result<&'static str> {
    if r == 0.0 {
        return Ok("macroscopic");
    }
    Ok(match classify_regime(r, DEFAULT_REGIME_THRESHOLD)? {
        Regime::Microscopic => "microscopic",
        Regime::Macroscopic => "macroscopic",
        Regime::Intermediate => "intermediate",
    })
}

fn config_err(e: Error) -> Error {
    match e {
        Error::InvalidInput { name, reason } => Error::Config(format!("invalid {name}: {reason}")),
        other => other,
    }
}

pub fn regime_compare(settings: &RegimeSettings) -> Result<Vec<RegimeRow>> {
    if settings.mass_ratios.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
        return Err(Error::Config("mass_ratios must be finite and non-negative".into()));
    }
    if !(settings.horizon > 0.0) || !settings.horizon.is_finite() {
        return Err(Error::Config(format!("horizon_tau must be positive, got {}", settings.horizon)));
    }
    if settings.amplitude == 0.0 || !settings.amplitude.is_finite() {
        return Err(Error::Config(format!("A must be finite and non-zero, got {}", settings.amplitude)));
    }
    let grid = Grid::new(settings.n, settings.length).map_err(config_err)?;
    let r_max = settings.mass_ratios.iter().copied().fold(0.0, f64::max);
    let widest = CanonicalCoefficients::new(r_max, 1.0, settings.v).map_err(config_err)?;
    let band_limit = match widest.stability() {
        SpectralStability::AllUnstable if !settings.override_unstable => {
            return Err(Error::Config(format!(
                "v = {} makes every mode unstable; set override_unstable = true",
                settings.v
            )))
        }
        SpectralStability::StableBelow(kappa) => BandLimit::EveryStep(0.5 * kappa.sqrt()),
        _ => BandLimit::Off,
    };
    settings
        .mass_ratios
        .par_iter()
        .map(|&r| compare_one(settings, grid, r, band_limit))
        .collect()
}

fn compare_one(settings: &RegimeSettings, grid: Grid<f64>, r: f64, band_limit: BandLimit<f64>) -> Result<RegimeRow> {
    let full = CanonicalCoefficients::new(r, 1.0, settings.v).map_err(config_err)?;
    let macroscopic = CanonicalCoefficients::new(0.0, 1.0, settings.v).map_err(config_err)?;
    let dt = match settings.dt {
        Some(dt) => dt,
        None => stability_dt(&full, &grid, settings.laplacian, settings.safety).map_err(config_err)?.dt,
    };
    let a = C64::new(settings.amplitude, 0.0);
    let v = C64::new(settings.v, 0.0);
    let iu = C64::new(0.0, 1.0);

    let uniform = FieldState::uniform(grid, C64::new(0.0, 0.0), C64::new(0.0, 2.0) * a);
    let packet_psi = gaussian_packet(grid, 0.5 * settings.length, settings.sigma, 0.0)
        .map_err(config_err)?
        .scale(a);
    let packet = FieldState::new(packet_psi.clone(), packet_psi.scale(-iu * v))?;

    let distance = |initial: FieldState<f64>, limit: BandLimit<f64>| -> Result<f64> {
        let run = |coeffs: CanonicalCoefficients<f64>| {
            evolve(&PdeProblem {
                coeffs,
                grid,
                initial: initial.clone(),
                t_end: settings.horizon,
                dt,
                laplacian: settings.laplacian,
                band_limit: limit,
                snapshot_stride: 1,
                allow_unstable: settings.override_unstable,
                spectral_diagnostics: true,
            })
        };
        let a = run(full)?;
        let b = run(macroscopic)?;
        Ok(a.iter()
            .zip(&b)
            .map(|(x, y)| x.state.psi.sup_distance(&y.state.psi))
            .fold(0.0, f64::max))
    };

    Ok(RegimeRow {
        r,
        uniform_distance: distance(uniform, band_limit)?,
        packet_distance: distance(packet, band_limit)?,
        regime: regime_label(r)?,
        dt,
    })
}
