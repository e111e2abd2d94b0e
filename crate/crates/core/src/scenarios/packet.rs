//! Gaussian packet evolved with one of the equation variants.

use crate::analytic::{reduce_equation, CanonicalCoefficients, EquationForm, EquationParameters, SpectralStability};
use crate::error::{Error, Result};
use crate::pde::{
    evolve, free_packet_width, gaussian_packet, schrodinger_velocity, stability_dt, BandLimit,
    FieldState, Grid, Laplacian, LaplacianKind, PdeProblem, Snapshot,
};

use super::config::PacketForm;

/// Snapshots kept per run, roughly.
pub const TARGET_SNAPSHOTS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct PacketSettings {
    pub form: PacketForm,
    pub r: f64,
    pub v: f64,
    pub n: usize,
    pub length: f64,
    pub sigma: f64,
    pub k0: f64,
    pub horizon: f64,
    pub laplacian: LaplacianKind,
    pub safety: f64,
    pub dt: Option<f64>,
    pub override_unstable: bool,
}

impl Default for PacketSettings {
    fn default() -> Self {
        Self {
            form: PacketForm::Full,
            r: 1.0,
            v: 0.0,
            n: 256,
            length: 256.0,
            sigma: 8.0,
            k0: 0.0,
            horizon: 10.0,
            laplacian: LaplacianKind::Spectral,
            safety: 0.5,
            dt: None,
            override_unstable: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PacketRun {
    pub coeffs: CanonicalCoefficients<f64>,
    pub grid: Grid<f64>,
    pub dt: f64,
    pub stride: usize,
    /// Projection cutoff applied after every step, if any.
    pub k_cut: Option<f64>,
    pub snapshots: Vec<Snapshot<f64>>,
}

pub const DIAGNOSTICS_HEADER: [&str; 6] = ["t", "l2_norm", "max_abs", "width", "mean_x", "width_free_schrodinger"];
pub const FINAL_HEADER: [&str; 4] = ["x", "re_psi", "im_psi", "abs_psi"];

fn config_err(e: Error) -> Error {
    match e {
        Error::InvalidInput { name, reason } => Error::Config(format!("invalid {name}: {reason}")),
        other => other,
    }
}

pub fn packet_coefficients(form: PacketForm, r: f64, v: f64) -> Result<CanonicalCoefficients<f64>> {
    let form = match form {
        PacketForm::Schrodinger => return CanonicalCoefficients::schrodinger(r, v),
        PacketForm::Full => EquationForm::Full,
        PacketForm::Microscopic => EquationForm::Microscopic,
        PacketForm::Macroscopic => EquationForm::Macroscopic,
    };
    reduce_equation(&EquationParameters::new(r, v, form)?)
}

pub fn run_packet(settings: &PacketSettings) -> Result<PacketRun> {
    if !(settings.horizon > 0.0) || !settings.horizon.is_finite() {
        return Err(Error::Config(format!("horizon_tau must be positive, got {}", settings.horizon)));
    }
    let coeffs = packet_coefficients(settings.form, settings.r, settings.v).map_err(config_err)?;
    let grid = Grid::new(settings.n, settings.length).map_err(config_err)?;
    let (band_limit, k_cut) = match coeffs.stability() {
        SpectralStability::AllStable => (BandLimit::Off, None),
        SpectralStability::StableBelow(kappa) => {
            let k = 0.5 * kappa.sqrt();
            (BandLimit::EveryStep(k), Some(k))
        }
        SpectralStability::AllUnstable if settings.override_unstable => (BandLimit::Off, None),
        SpectralStability::AllUnstable => {
            return Err(Error::Config(format!(
                "v = {} makes every mode unstable; set override_unstable = true",
                settings.v
            )))
        }
    };
    let dt = match settings.dt {
        Some(dt) => dt,
        None => stability_dt(&coeffs, &grid, settings.laplacian, settings.safety).map_err(config_err)?.dt,
    };
    let psi = gaussian_packet(grid, 0.5 * settings.length, settings.sigma, settings.k0).map_err(config_err)?;
    let lap = Laplacian::new(grid, settings.laplacian);
    let dpsi = schrodinger_velocity(&psi, &coeffs, &lap);
    let steps = (settings.horizon / dt).ceil() as usize;
    let stride = (steps / TARGET_SNAPSHOTS).max(1);
    let snapshots = evolve(&PdeProblem {
        coeffs,
        grid,
        initial: FieldState::new(psi, dpsi)?,
        t_end: settings.horizon,
        dt,
        laplacian: settings.laplacian,
        band_limit,
        snapshot_stride: stride,
        allow_unstable: settings.override_unstable,
        spectral_diagnostics: true,
    })
    .map_err(config_err)?;
    Ok(PacketRun {
        coeffs,
        grid,
        dt,
        stride,
        k_cut,
        snapshots,
    })
}

/// Width of the matching free Schrodinger packet; only meaningful at `k0 = 0`
/// where the packet does not wrap.
pub fn reference_width(settings: &PacketSettings, coeffs: &CanonicalCoefficients<f64>, t: f64) -> f64 {
    free_packet_width(settings.sigma, coeffs.a_xx, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schrodinger_packet_spreads_as_predicted() {
        let settings = PacketSettings {
            form: PacketForm::Schrodinger,
            n: 128,
            length: 100.0,
            sigma: 2.0,
            horizon: 8.0,
            ..Default::default()
        };
        let run = run_packet(&settings).unwrap();
        let last = run.snapshots.last().unwrap();
        let width = last.state.psi.rms_width();
        let expected = reference_width(&settings, &run.coeffs, last.time);
        assert!((width / expected - 1.0).abs() < 1e-3, "{width} vs {expected}");
        assert!(run.k_cut.is_none());
    }

    #[test]
    fn full_packet_stays_bounded() {
        let settings = PacketSettings {
            n: 64,
            length: 64.0,
            sigma: 4.0,
            horizon: 20.0,
            ..Default::default()
        };
        let run = run_packet(&settings).unwrap();
        assert_eq!(run.k_cut, Some(0.5));
        let first = run.snapshots[0].max_abs;
        assert!(run.snapshots.iter().all(|s| s.max_abs <= 1.01 * first));
    }

    #[test]
    fn all_unstable_needs_override() {
        let settings = PacketSettings {
            v: 0.75,
            n: 32,
            length: 32.0,
            sigma: 4.0,
            horizon: 1.0,
            ..Default::default()
        };
        assert!(matches!(run_packet(&settings), Err(Error::Config(_))));
        let run = run_packet(&PacketSettings {
            override_unstable: true,
            ..settings
        })
        .unwrap();
        assert!(run.snapshots.len() > 2);
    }
}
