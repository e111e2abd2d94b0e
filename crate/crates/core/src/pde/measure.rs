use num_complex::Complex;

use super::Snapshot;
use crate::error::{Error, Result};
use crate::integrator::fit_slope;
use crate::scalar::Real;

/// Frequency and growth rate of one Fourier mode, fitted over a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFit<T> {
    /// `omega` in `exp(-i omega t)`.
    pub frequency: T,
    /// Slope of `ln |c(t)|`.
    pub growth_rate: T,
}

/// Unwraps a sequence of phases so successive values differ by less than pi.
pub fn unwrap_phase<T: Real>(phases: &[T]) -> Vec<T> {
    let tau = T::TAU();
    let mut out = Vec::with_capacity(phases.len());
    let mut offset = T::zero();
    for (j, &p) in phases.iter().enumerate() {
        if j > 0 {
            let prev = phases[j - 1];
            let jump = p - prev;
            if jump > T::PI() {
                offset = offset - tau;
            } else if jump < -T::PI() {
                offset = offset + tau;
            }
        }
        out.push(p + offset);
    }
    out
}

/// Least-squares fit of the amplitude of mode `m` across the snapshots.
pub fn fit_mode<T: Real>(snapshots: &[Snapshot<T>], m: i64) -> Result<ModeFit<T>> {
    if snapshots.len() < 3 {
        return Err(Error::invalid("snapshots", "need at least three to fit a mode"));
    }
    let amplitudes: Vec<Complex<T>> = snapshots
        .iter()
        .map(|s| s.state.psi.mode_amplitude(m))
        .collect();
    if amplitudes.iter().any(|c| c.norm() == T::zero()) {
        return Err(Error::invalid("snapshots", format!("mode {m} has zero amplitude")));
    }
    let times: Vec<T> = snapshots.iter().map(|s| s.time).collect();
    let phases = unwrap_phase(&amplitudes.iter().map(|c| c.arg()).collect::<Vec<_>>());
    let logs: Vec<T> = amplitudes.iter().map(|c| c.norm().ln()).collect();
    Ok(ModeFit {
        frequency: -fit_slope(&times, &phases),
        growth_rate: fit_slope(&times, &logs),
    })
}
