//! Temporal convergence of RK4 against the free solution.

use crate::analytic::free_solution;
use crate::error::{Error, Result};
use crate::integrator::{convergence_order, integrate, rhs_uniform, TemporalState};
use crate::C64;

pub const DEFAULT_DTS: [f64; 3] = [4e-3, 2e-3, 1e-3];
pub const DEFAULT_HORIZON: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    /// `(dt, max |psi_numeric - psi_analytic|)` per step size.
    pub errors: Vec<(f64, f64)>,
    pub order: f64,
}

/// Checks that the step list has at least three entries, each half the previous.
pub fn validate_dts(dts: &[f64]) -> Result<()> {
    if dts.len() < 3 {
        return Err(Error::Config(format!("need at least 3 step sizes, got {}", dts.len())));
    }
    if dts.iter().any(|&h| !(h > 0.0) || !h.is_finite()) {
        return Err(Error::Config("step sizes must be positive".into()));
    }
    if let Some(w) = dts.windows(2).find(|w| (w[0] / w[1] - 2.0).abs() > 1e-9) {
        return Err(Error::Config(format!(
            "step sizes must halve successively, got {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Maximum error over every step of a run to `horizon`.
pub fn max_error(amplitude: f64, horizon: f64, dt: f64) -> Result<f64> {
    let a = C64::new(amplitude, 0.0);
    let traj = integrate(
        TemporalState::from_amplitude(a),
        |s: &TemporalState<f64>| rhs_uniform(s, 0.0),
        horizon,
        dt,
        1,
    )?;
    Ok(traj
        .iter()
        .map(|(t, s)| (s.psi - free_solution(a, t)).norm())
        .fold(0.0, f64::max))
}

pub fn convergence_study(dts: &[f64], amplitude: f64, horizon: f64) -> Result<ConvergenceStudy> {
    validate_dts(dts)?;
    if amplitude == 0.0 || !amplitude.is_finite() {
        return Err(Error::Config(format!("A must be finite and non-zero, got {amplitude}")));
    }
    let errors = dts
        .iter()
        .map(|&dt| max_error(amplitude, horizon, dt).map(|e| (dt, e)))
        .collect::<Result<Vec<_>>>()?;
    let order = convergence_order(&errors)?;
    Ok(ConvergenceStudy { errors, order })
}
