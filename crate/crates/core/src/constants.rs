//! Physical constants, derived Planck scales and the SI <-> Planck-unit mapping.
//!
//! Every solver in this crate works in Planck units (hbar = c = M_P = 1). Times
//! are measured in units of the Planck time, lengths in Planck lengths and
//! energies in units of M_P c^2. Physical units only appear at the I/O edges.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Reduced Planck constant, CODATA 2018 (J s).
pub const CODATA_HBAR: f64 = 1.054571817e-34;
/// Speed of light in vacuum (m/s).
pub const CODATA_C: f64 = 2.99792458e8;
/// Planck mass, CODATA 2018 (kg).
pub const CODATA_PLANCK_MASS: f64 = 2.176434e-8;
/// One GeV expressed in joules.
pub const GEV_IN_JOULES: f64 = 1.602176634e-10;

/// The three constants that fix the Planck scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants<T> {
    /// J s
    pub hbar: T,
    /// m/s
    pub c: T,
    /// kg
    pub planck_mass: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn new(hbar: T, c: T, planck_mass: T) -> Result<Self> {
        let constants = Self {
            hbar,
            c,
            planck_mass,
        };
        constants.validate()?;
        Ok(constants)
    }

    pub fn codata() -> Self {
        Self {
            hbar: T::lit(CODATA_HBAR),
            c: T::lit(CODATA_C),
            planck_mass: T::lit(CODATA_PLANCK_MASS),
        }
    }

    /// hbar = c = M_P = 1.
    pub fn natural() -> Self {
        Self {
            hbar: T::one(),
            c: T::one(),
            planck_mass: T::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("hbar", self.hbar),
            ("c", self.c),
            ("planck_mass", self.planck_mass),
        ] {
            if !value.is_finite() || value <= T::zero() {
                return Err(Error::InvalidInput {
                    name: "physical constant",
                    reason: format!("{name} must be positive and finite, got {value}"),
                });
            }
        }
        Ok(())
    }

    /// Planck mass in grams.
    pub fn planck_mass_grams(&self) -> T {
        self.planck_mass * T::lit(1e3)
    }

    /// Rest energy M_P c^2 in joules.
    pub fn rest_energy(&self) -> T {
        self.planck_mass * self.c * self.c
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::codata()
    }
}

/// Planck scales derived from a [`PhysicalConstants`] set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedScales<T> {
    /// Planck time hbar / (M_P c^2), s.
    pub tau_p: T,
    /// c * tau_p, m.
    pub length_p: T,
    /// M_P c^2, J.
    pub energy_p: T,
    /// M_P c^2 in GeV.
    pub energy_p_gev: T,
    /// 1 / tau_p, rad/s. The jitter frequency quoted for the free pilot wave.
    pub omega: T,
    /// 2 / tau_p, rad/s. Angular frequency of the factor exp(-2 i t / tau_p).
    pub oscillation_omega: T,
    /// pi * tau_p, s. Period of Re psi = A (1 - cos(2 t / tau_p)).
    pub period: T,
}

pub fn derive_scales<T: Real>(constants: &PhysicalConstants<T>) -> Result<DerivedScales<T>> {
    constants.validate()?;
    let energy_p = constants.rest_energy();
    let tau_p = constants.hbar / energy_p;
    Ok(DerivedScales {
        tau_p,
        length_p: constants.c * tau_p,
        energy_p,
        energy_p_gev: energy_p / T::lit(GEV_IN_JOULES),
        omega: tau_p.recip(),
        oscillation_omega: T::lit(2.0) / tau_p,
        period: T::PI() * tau_p,
    })
}

/// A physical point (time, position, potential, mass) in Planck units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanckCoordinates<T> {
    /// t / tau_p
    pub tau: T,
    /// x / length_p
    pub xi: T,
    /// V / (M_P c^2)
    pub v: T,
    /// M_P / m
    pub r: T,
}

/// The same point in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiCoordinates<T> {
    pub t: T,
    pub x: T,
    pub potential: T,
    pub mass: T,
}

pub fn to_dimensionless<T: Real>(
    point: SiCoordinates<T>,
    scales: &DerivedScales<T>,
    constants: &PhysicalConstants<T>,
) -> Result<PlanckCoordinates<T>> {
    if !(point.mass > T::zero()) || !point.mass.is_finite() {
        return Err(Error::invalid("mass", format!("must be positive, got {}", point.mass)));
    }
    Ok(PlanckCoordinates {
        tau: point.t / scales.tau_p,
        xi: point.x / scales.length_p,
        v: point.potential / scales.energy_p,
        r: constants.planck_mass / point.mass,
    })
}

pub fn from_dimensionless<T: Real>(
    point: PlanckCoordinates<T>,
    scales: &DerivedScales<T>,
    constants: &PhysicalConstants<T>,
) -> Result<SiCoordinates<T>> {
    if !(point.r > T::zero()) || !point.r.is_finite() {
        return Err(Error::invalid("mass ratio", format!("must be positive, got {}", point.r)));
    }
    Ok(SiCoordinates {
        t: point.tau * scales.tau_p,
        x: point.xi * scales.length_p,
        potential: point.v * scales.energy_p,
        mass: constants.planck_mass / point.r,
    })
}
