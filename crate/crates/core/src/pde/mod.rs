//! Method-of-lines solver for the one-dimensional pilot-wave equation on a
//! periodic grid.
//!
//! The second time derivative is handled by evolving `(psi, psi_t)` together.
//! For `a_tt > 0`,
//!
//! ```text
//! psi_tt = (2 / a_tt) (v psi - i psi_t) - (a_xx / a_tt) lap(psi)
//! ```
//!
//! and for `a_tt = 0` the Schrodinger equation `psi_t = i (a_xx/2) lap(psi) - i v psi`
//! is evolved, with `psi_t` carried along through the time-differentiated equation.
//!
//! Modes with `a_xx k^2 + 2 v > 1 / a_tt` grow exponentially. Roundoff seeds
//! them even when the data are band limited, so long runs project onto the
//! initial band after every step ([`BandLimit::EveryStep`]).

mod grid;
mod measure;
mod operator;

pub use grid::{ComplexField, FieldState, Grid, Spectral};
pub use measure::{fit_mode, unwrap_phase, ModeFit};
pub use operator::{eigenvalue, laplacian, spectral_laplacian, Laplacian, LaplacianKind};

use num_complex::Complex;
use serde::Serialize;

use crate::analytic::{literal_terms, CanonicalCoefficients, EquationForm, SpectralStability};
use crate::error::{Error, Result};
use crate::integrator::integrate_with;
use crate::scalar::{i, Real};

/// Time derivative of a [`FieldState`] under the canonical equation.
pub fn rhs_field<T: Real>(
    state: &FieldState<T>,
    coeffs: &CanonicalCoefficients<T>,
    lap: &Laplacian<T>,
) -> FieldState<T> {
    let grid = *state.grid();
    let psi = state.psi.values();
    let phi = state.dpsi_dt.values();
    let iu = i::<T>();
    let v = coeffs.v;

    if coeffs.a_tt == T::zero() {
        let half_axx = coeffs.a_xx * T::lit(0.5);
        let schrodinger = |f: &[Complex<T>]| -> Vec<Complex<T>> {
            let lf = lap.apply(f);
            f.iter()
                .zip(&lf)
                .map(|(&y, &l)| iu * (l * half_axx - y * v))
                .collect()
        };
        return FieldState {
            psi: ComplexField::from_raw(grid, schrodinger(psi)),
            dpsi_dt: ComplexField::from_raw(grid, schrodinger(phi)),
        };
    }

    let lpsi = lap.apply(psi);
    let inertia = T::lit(2.0) / coeffs.a_tt;
    let spatial = coeffs.a_xx / coeffs.a_tt;
    let accel = psi
        .iter()
        .zip(phi)
        .zip(&lpsi)
        .map(|((&y, &p), &l)| (y * v - iu * p) * inertia - l * spatial)
        .collect();
    FieldState {
        psi: state.dpsi_dt.clone(),
        dpsi_dt: ComplexField::from_raw(grid, accel),
    }
}

/// Time derivative assembled term by term from the uncancelled equation
/// `i psi_t = sum_terms + v psi`, with mass ratio `r` and potential `v`.
pub fn rhs_field_literal<T: Real>(
    state: &FieldState<T>,
    form: EquationForm,
    r: T,
    v: T,
    lap: &Laplacian<T>,
) -> FieldState<T> {
    let grid = *state.grid();
    let terms = literal_terms(form, r);
    let temporal = terms.iter().fold(T::zero(), |acc, t| acc + t.temporal);
    let iu = i::<T>();
    let lpsi = lap.apply(state.psi.values());
    let accel = state
        .psi
        .values()
        .iter()
        .zip(state.dpsi_dt.values())
        .zip(&lpsi)
        .map(|((&y, &p), &l)| {
            let spatial = terms
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, t| acc + l * t.spatial);
            (iu * p - spatial - y * v) / temporal
        })
        .collect();
    FieldState {
        psi: state.dpsi_dt.clone(),
        dpsi_dt: ComplexField::from_raw(grid, accel),
    }
}

/// Largest stable RK4 step for a grid and coefficient set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepBound<T> {
    pub dt: T,
    /// Fastest mode rate used for the bound.
    pub omega_max: T,
    /// Number of grid modes with an exponentially growing branch.
    pub unstable_modes: usize,
}

impl<T: Real> StepBound<T> {
    pub fn all_unstable(&self, n: usize) -> bool {
        self.unstable_modes == n
    }
}

const RK4_IMAGINARY_AXIS_LIMIT: f64 = 2.8;

/// `dt = safety * 2.8 / omega_max`, `omega_max` the largest mode rate over the
/// grid. Growing branches contribute `|Re| + |Im|`.
pub fn stability_dt<T: Real>(
    coeffs: &CanonicalCoefficients<T>,
    grid: &Grid<T>,
    kind: LaplacianKind,
    safety: T,
) -> Result<StepBound<T>> {
    if !(safety > T::zero() && safety <= T::one()) {
        return Err(Error::invalid("safety factor", format!("must lie in (0, 1], got {safety}")));
    }
    let mut omega_max = T::zero();
    let mut unstable_modes = 0;
    for j in 0..grid.n() {
        let kappa = -eigenvalue(grid, kind, j);
        let freqs = coeffs.mode_frequencies(kappa);
        let mut growing = false;
        for w in std::iter::once(freqs.slow).chain(freqs.fast) {
            let rate = if w.im == T::zero() {
                w.re.abs()
            } else {
                growing |= w.im > T::zero();
                w.re.abs() + w.im.abs()
            };
            omega_max = omega_max.max(rate);
        }
        unstable_modes += usize::from(growing);
    }
    if omega_max == T::zero() {
        return Err(Error::invalid("coefficients", "no dynamics: every mode frequency is zero"));
    }
    Ok(StepBound {
        dt: safety * T::lit(RK4_IMAGINARY_AXIS_LIMIT) / omega_max,
        omega_max,
        unstable_modes,
    })
}

/// Zeroes every Fourier mode with `|k| > k_cut`.
pub fn spectral_filter<T: Real>(state: &FieldState<T>, k_cut: T) -> Result<FieldState<T>> {
    if !(k_cut >= T::zero()) {
        return Err(Error::invalid("cutoff", format!("k_cut must be non-negative, got {k_cut}")));
    }
    let spectral = Spectral::new(state.grid().n());
    Ok(project(state, &spectral, k_cut))
}

fn project<T: Real>(state: &FieldState<T>, spectral: &Spectral<T>, k_cut: T) -> FieldState<T> {
    let grid = *state.grid();
    let keep = |j: usize| {
        if grid.wavenumber(j).abs() > k_cut {
            T::zero()
        } else {
            T::one()
        }
    };
    FieldState {
        psi: ComplexField::from_raw(grid, spectral.filter(state.psi.values(), keep)),
        dpsi_dt: ComplexField::from_raw(grid, spectral.filter(state.dpsi_dt.values(), keep)),
    }
}

/// When the spectral projection onto `|k| <= cutoff` is applied.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BandLimit<T> {
    #[default]
    Off,
    /// Filter the initial data only.
    Initial(T),
    /// Filter the initial data and the state after every step.
    EveryStep(T),
}

impl<T: Copy> BandLimit<T> {
    pub fn cutoff(&self) -> Option<T> {
        match *self {
            BandLimit::Off => None,
            BandLimit::Initial(k) | BandLimit::EveryStep(k) => Some(k),
        }
    }
}

/// Amplitude above which a run with spectral diagnostics is declared blown up.
pub const BLOWUP_AMPLITUDE: f64 = 1e100;

/// Relative spectral energy tolerated above the critical wavenumber.
pub const UNSTABLE_ENERGY_TOLERANCE: f64 = 1e-20;

#[derive(Debug, Clone)]
pub struct PdeProblem<T> {
    pub coeffs: CanonicalCoefficients<T>,
    pub grid: Grid<T>,
    pub initial: FieldState<T>,
    pub t_end: T,
    pub dt: T,
    pub laplacian: LaplacianKind,
    pub band_limit: BandLimit<T>,
    pub snapshot_stride: usize,
    /// Permit initial data with energy in growing modes.
    pub allow_unstable: bool,
    /// Watch the amplitude and name the dominant mode on blow-up.
    pub spectral_diagnostics: bool,
}

impl<T: Real> PdeProblem<T> {
    /// Problem with the largest stable step scaled by `safety` and no band limit.
    pub fn new(
        coeffs: CanonicalCoefficients<T>,
        initial: FieldState<T>,
        t_end: T,
        laplacian: LaplacianKind,
        safety: T,
    ) -> Result<Self> {
        let grid = *initial.grid();
        let bound = stability_dt(&coeffs, &grid, laplacian, safety)?;
        Ok(Self {
            coeffs,
            grid,
            initial,
            t_end,
            dt: bound.dt,
            laplacian,
            band_limit: BandLimit::Off,
            snapshot_stride: 1,
            allow_unstable: false,
            spectral_diagnostics: true,
        })
    }

    fn validate(&self, lap: &Laplacian<T>, initial: &FieldState<T>) -> Result<()> {
        if *initial.grid() != self.grid {
            return Err(Error::invalid("initial state", "grid differs from the problem grid"));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::invalid("snapshot stride", "must be at least 1"));
        }
        let bound = stability_dt(&self.coeffs, &self.grid, self.laplacian, T::one())?;
        if !(self.dt > T::zero()) || self.dt > bound.dt * (T::one() + T::lit(1e-12)) {
            return Err(Error::invalid(
                "time step",
                format!("dt = {} exceeds the RK4 stability limit {}", self.dt, bound.dt),
            ));
        }
        if self.allow_unstable {
            return Ok(());
        }
        match self.coeffs.stability() {
            SpectralStability::AllStable => Ok(()),
            SpectralStability::AllUnstable => Err(Error::invalid(
                "coefficients",
                "every wavenumber is unstable (v >= 1/(2 a_tt)); set allow_unstable to run anyway",
            )),
            SpectralStability::StableBelow(kappa_crit) => {
                let fraction = unstable_energy_fraction(initial, lap, kappa_crit);
                if fraction > T::lit(UNSTABLE_ENERGY_TOLERANCE) {
                    Err(Error::invalid(
                        "initial state",
                        format!(
                            "relative spectral energy {fraction:e} above the critical wavenumber {}; band-limit the data or set allow_unstable",
                            kappa_crit.sqrt()
                        ),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }
}

fn unstable_energy_fraction<T: Real>(state: &FieldState<T>, lap: &Laplacian<T>, kappa_crit: T) -> T {
    let mut above = T::zero();
    let mut total = T::zero();
    for field in [&state.psi, &state.dpsi_dt] {
        let coeffs = lap.spectral().forward(field.values());
        for (j, c) in coeffs.iter().enumerate() {
            let e = c.norm_sqr();
            total = total + e;
            if -lap.eigenvalue(j) > kappa_crit {
                above = above + e;
            }
        }
    }
    if total == T::zero() {
        T::zero()
    } else {
        above / total
    }
}

/// A stored state with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub time: T,
    pub state: FieldState<T>,
    pub l2_norm: T,
    pub max_abs: T,
}

/// Fourier bin with the largest amplitude.
pub fn dominant_mode<T: Real>(field: &ComplexField<T>, spectral: &Spectral<T>) -> i64 {
    let coeffs = spectral.forward(field.values());
    let (j, _) = coeffs
        .iter()
        .enumerate()
        .fold((0, T::zero()), |best, (j, c)| if c.norm() > best.1 { (j, c.norm()) } else { best });
    field.grid().mode_number(j)
}

/// Runs the method-of-lines RK4 evolution and returns every
/// `snapshot_stride`-th state plus the first and last.
pub fn evolve<T: Real>(problem: &PdeProblem<T>) -> Result<Vec<Snapshot<T>>> {
    let lap = Laplacian::new(problem.grid, problem.laplacian);
    let initial = match problem.band_limit.cutoff() {
        Some(k_cut) => project(&problem.initial, lap.spectral(), k_cut),
        None => problem.initial.clone(),
    };
    problem.validate(&lap, &initial)?;

    let coeffs = problem.coeffs;
    let every_step = match problem.band_limit {
        BandLimit::EveryStep(k) => Some(k),
        _ => None,
    };
    let limit = T::lit(BLOWUP_AMPLITUDE);
    let trajectory = integrate_with(
        initial,
        |s: &FieldState<T>| rhs_field(s, &coeffs, &lap),
        problem.t_end,
        problem.dt,
        problem.snapshot_stride,
        |t, state| {
            if let Some(k_cut) = every_step {
                *state = project(state, lap.spectral(), k_cut);
            }
            if problem.spectral_diagnostics && state.psi.max_abs() > limit {
                return Err(Error::BlowUp {
                    time: t.as_f64(),
                    mode: Some(dominant_mode(&state.psi, lap.spectral())),
                });
            }
            Ok(())
        },
    )?;

    Ok(trajectory
        .times
        .into_iter()
        .zip(trajectory.states)
        .map(|(time, state)| Snapshot {
            time,
            l2_norm: state.psi.l2_norm(),
            max_abs: state.psi.max_abs(),
            state,
        })
        .collect())
}

/// `psi_t = i (a_xx/2) lap(psi) - i v psi`: the time derivative that puts a
/// packet on the slow (Schrodinger) branch to leading order.
pub fn schrodinger_velocity<T: Real>(
    psi: &ComplexField<T>,
    coeffs: &CanonicalCoefficients<T>,
    lap: &Laplacian<T>,
) -> ComplexField<T> {
    let iu = i::<T>();
    let half_axx = coeffs.a_xx * T::lit(0.5);
    let lpsi = lap.apply(psi.values());
    ComplexField::from_raw(
        *psi.grid(),
        psi.values()
            .iter()
            .zip(&lpsi)
            .map(|(&y, &l)| iu * (l * half_axx - y * coeffs.v))
            .collect(),
    )
}

/// `exp(-(x - centre)^2 / (4 sigma^2) + i k0 (x - centre))`, so that `|psi|^2`
/// has standard deviation `sigma`.
pub fn gaussian_packet<T: Real>(grid: Grid<T>, centre: T, sigma: T, k0: T) -> Result<ComplexField<T>> {
    if !(sigma > T::zero()) {
        return Err(Error::invalid("packet width", format!("sigma must be positive, got {sigma}")));
    }
    let four = T::lit(4.0);
    Ok(ComplexField::from_fn(grid, |x| {
        let d = x - centre;
        Complex::new(-d * d / (four * sigma * sigma), k0 * d).exp()
    }))
}

/// Width of a free Schrodinger packet, `sigma0 sqrt(1 + (a_xx t / (2 sigma0^2))^2)`.
pub fn free_packet_width<T: Real>(sigma0: T, a_xx: T, t: T) -> T {
    let s = a_xx * t / (T::lit(2.0) * sigma0 * sigma0);
    sigma0 * (T::one() + s * s).sqrt()
}

#[cfg(test)]
mod tests;
