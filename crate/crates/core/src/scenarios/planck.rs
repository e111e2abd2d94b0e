//! The physical numbers behind the free pilot-wave oscillation.

use serde::Serialize;

use crate::constants::{derive_scales, DerivedScales, PhysicalConstants};
use crate::error::Result;

/// Current best time resolution (attosecond pulses), s.
pub const TIME_RESOLUTION: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanckReport {
    pub constants: PhysicalConstants<f64>,
    pub scales: DerivedScales<f64>,
    pub planck_mass_grams: f64,
    /// E = hbar / tau_p in GeV.
    pub energy_gev: f64,
    pub log10_energy_gev: f64,
    pub log10_tau_p: f64,
    pub log10_period: f64,
    /// period / TIME_RESOLUTION
    pub period_over_resolution: f64,
}

pub fn report_planck_numbers(constants: &PhysicalConstants<f64>) -> Result<PlanckReport> {
    let scales = derive_scales(constants)?;
    Ok(PlanckReport {
        constants: *constants,
        scales,
        planck_mass_grams: constants.planck_mass_grams(),
        energy_gev: scales.energy_p_gev,
        log10_energy_gev: scales.energy_p_gev.log10(),
        log10_tau_p: scales.tau_p.log10(),
        log10_period: scales.period.log10(),
        period_over_resolution: scales.period / TIME_RESOLUTION,
    })
}

impl PlanckReport {
    pub fn to_text(&self) -> String {
        let s = &self.scales;
        let lines = [
            format!("hbar                   {:.9e} J s", self.constants.hbar),
            format!("c                      {:.9e} m/s", self.constants.c),
            format!("Planck mass            {:.6e} kg ({:.6e} g)", self.constants.planck_mass, self.planck_mass_grams),
            format!("Planck time tau_p      {:.6e} s", s.tau_p),
            format!("Planck length          {:.6e} m", s.length_p),
            format!("jitter frequency 1/tau {:.6e} rad/s", s.omega),
            format!("oscillation 2/tau      {:.6e} rad/s", s.oscillation_omega),
            format!("period pi*tau          {:.6e} s (log10 {:.3})", s.period, self.log10_period),
            format!("energy hbar/tau        {:.6e} GeV (log10 {:.3})", self.energy_gev, self.log10_energy_gev),
            format!("period / 1e-18 s       {:.3e}", self.period_over_resolution),
        ];
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codata_orders_of_magnitude() {
        let rep = report_planck_numbers(&PhysicalConstants::codata()).unwrap();
        assert_eq!(rep.log10_energy_gev.round(), 19.0);
        assert!(rep.log10_period > -43.0 && rep.log10_period < -42.0);
        assert!(rep.period_over_resolution < 1e-24);
        assert!(rep.to_text().contains("GeV"));
    }
}
