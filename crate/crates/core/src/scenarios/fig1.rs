//! Free macroscopic pilot wave `psi = A (1 - exp(-2 i t))`, sampled from the
//! closed form and from an RK4 run of the uniform equation.

use std::f64::consts::PI;

use crate::analytic::free_solution;
use crate::error::{Error, Result};
use crate::integrator::{integrate, rhs_uniform, TemporalState};
use crate::C64;

pub const DEFAULT_HORIZONS: [f64; 2] = [100.0, 1000.0];
pub const DEFAULT_SAMPLES_PER_PERIOD: u32 = 20;
pub const DEFAULT_DT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1Row {
    pub t: f64,
    pub analytic: C64,
    pub numeric: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Series {
    pub horizon: f64,
    /// Step actually used; the sample interval `pi / samples_per_period` is an
    /// exact multiple of it.
    pub dt: f64,
    pub stride: usize,
    pub rows: Vec<Fig1Row>,
    /// Largest `|psi_numeric - psi_analytic|` over the samples.
    pub max_deviation: f64,
    pub re_min: f64,
    pub re_max: f64,
    /// Mean spacing of upward crossings of `Re psi = A`.
    pub period: f64,
    pub complete_periods: usize,
}

/// Chooses the step so that `stride` steps span exactly `pi / samples_per_period`.
pub fn sampling(samples_per_period: u32, dt_request: f64) -> Result<(f64, usize)> {
    if samples_per_period < 2 {
        return Err(Error::Config(format!(
            "samples_per_period must be at least 2, got {samples_per_period}"
        )));
    }
    if !(dt_request > 0.0) || !dt_request.is_finite() {
        return Err(Error::Config(format!("dt must be positive, got {dt_request}")));
    }
    let interval = PI / f64::from(samples_per_period);
    let stride = (interval / dt_request).ceil().max(1.0) as usize;
    Ok((interval / stride as f64, stride))
}

pub fn fig1_series(amplitude: f64, horizon: f64, samples_per_period: u32, dt_request: f64) -> Result<Fig1Series> {
    if amplitude == 0.0 || !amplitude.is_finite() {
        return Err(Error::Config(format!("A must be finite and non-zero, got {amplitude}")));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::Config(format!("horizon_tau must be positive, got {horizon}")));
    }
    let (dt, stride) = sampling(samples_per_period, dt_request)?;
    let a = C64::new(amplitude, 0.0);
    let traj = integrate(
        TemporalState::from_amplitude(a),
        |s: &TemporalState<f64>| rhs_uniform(s, 0.0),
        horizon,
        dt,
        stride,
    )?;
    let rows: Vec<Fig1Row> = traj
        .iter()
        .map(|(t, s)| Fig1Row {
            t,
            analytic: free_solution(a, t),
            numeric: s.psi,
        })
        .collect();

    let max_deviation = rows
        .iter()
        .map(|r| (r.numeric - r.analytic).norm())
        .fold(0.0, f64::max);
    let re_min = rows.iter().map(|r| r.numeric.re).fold(f64::INFINITY, f64::min);
    let re_max = rows.iter().map(|r| r.numeric.re).fold(f64::NEG_INFINITY, f64::max);

    let crossings: Vec<f64> = rows
        .windows(2)
        .filter_map(|w| {
            let (y0, y1) = (w[0].numeric.re / amplitude - 1.0, w[1].numeric.re / amplitude - 1.0);
            (y0 < 0.0 && y1 >= 0.0).then(|| w[0].t + (w[1].t - w[0].t) * (-y0) / (y1 - y0))
        })
        .collect();
    let (period, complete_periods) = match crossings.len() {
        0 | 1 => (f64::NAN, 0),
        n => ((crossings[n - 1] - crossings[0]) / (n - 1) as f64, n - 1),
    };

    Ok(Fig1Series {
        horizon,
        dt,
        stride,
        rows,
        max_deviation,
        re_min,
        re_max,
        period,
        complete_periods,
    })
}

pub const FIG1_HEADER: [&str; 7] = [
    "t_over_tau",
    "re_psi_analytic",
    "im_psi_analytic",
    "abs_psi_analytic",
    "re_psi_numeric",
    "im_psi_numeric",
    "abs_psi_numeric",
];

/// File stem for a horizon, e.g. `h100`.
pub fn horizon_label(horizon: f64) -> String {
    format!("h{horizon}").replace('.', "p")
}
