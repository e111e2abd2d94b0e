//! Fixed-step classical Runge-Kutta integration for first-order complex systems.
//!
//! The spatially uniform equation `i psi' = -(1/2) psi'' + v psi` is written as
//! the system `psi' = phi`, `phi' = 2 (v psi - i phi)`. The same stepper drives
//! the method-of-lines field solver through the [`OdeState`] trait.

use num_complex::Complex;

use crate::analytic::FreeSolutionSpec;
use crate::error::{Error, Result};
use crate::scalar::{i, is_finite_c, Real};

/// A state vector that the Runge-Kutta stepper can combine.
pub trait OdeState<T: Real>: Clone {
    /// `self + h * k`
    fn add_scaled(&self, k: &Self, h: T) -> Self;

    /// `self + h/6 (k1 + 2 k2 + 2 k3 + k4)`
    fn rk4_combine(&self, k: [&Self; 4], h: T) -> Self;

    fn is_finite(&self) -> bool;
}

#[inline]
pub(crate) fn rk4_point<T: Real>(
    y: Complex<T>,
    k1: Complex<T>,
    k2: Complex<T>,
    k3: Complex<T>,
    k4: Complex<T>,
    h: T,
) -> Complex<T> {
    let two = T::lit(2.0);
    y + (k1 + (k2 + k3) * two + k4) * (h / T::lit(6.0))
}

/// `(psi, dpsi/dt)` for the spatially uniform equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalState<T> {
    pub psi: Complex<T>,
    pub dpsi_dt: Complex<T>,
}

impl<T: Real> TemporalState<T> {
    pub fn new(psi: Complex<T>, dpsi_dt: Complex<T>) -> Self {
        Self { psi, dpsi_dt }
    }

    /// Initial data of the free solution `A (1 - exp(-2 i t))`: `psi(0) = 0`, `psi'(0) = 2 i A`.
    pub fn from_amplitude(a: Complex<T>) -> Self {
        Self {
            psi: Complex::new(T::zero(), T::zero()),
            dpsi_dt: i::<T>() * a * T::lit(2.0),
        }
    }

    /// Initial data matching a general `A + B exp(-2 i t)`.
    pub fn from_free_solution(sol: &FreeSolutionSpec<T>) -> Self {
        Self {
            psi: sol.value(T::zero()),
            dpsi_dt: sol.derivative(T::zero()),
        }
    }

    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { psi: z, dpsi_dt: z }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            psi: self.psi * factor,
            dpsi_dt: self.dpsi_dt * factor,
        }
    }
}

impl<T: Real> OdeState<T> for TemporalState<T> {
    fn add_scaled(&self, k: &Self, h: T) -> Self {
        Self {
            psi: self.psi + k.psi * h,
            dpsi_dt: self.dpsi_dt + k.dpsi_dt * h,
        }
    }

    fn rk4_combine(&self, k: [&Self; 4], h: T) -> Self {
        Self {
            psi: rk4_point(self.psi, k[0].psi, k[1].psi, k[2].psi, k[3].psi, h),
            dpsi_dt: rk4_point(
                self.dpsi_dt,
                k[0].dpsi_dt,
                k[1].dpsi_dt,
                k[2].dpsi_dt,
                k[3].dpsi_dt,
                h,
            ),
        }
    }

    fn is_finite(&self) -> bool {
        is_finite_c(self.psi) && is_finite_c(self.dpsi_dt)
    }
}

/// Right-hand side of the uniform second-order equation: `(phi, 2 (v psi - i phi))`.
pub fn rhs_uniform<T: Real>(state: &TemporalState<T>, v: T) -> TemporalState<T> {
    let two = T::lit(2.0);
    TemporalState {
        psi: state.dpsi_dt,
        dpsi_dt: (state.psi * v - i::<T>() * state.dpsi_dt) * two,
    }
}

/// One classical fourth-order Runge-Kutta step.
///
/// Stable on the imaginary axis for `dt * |lambda_max| <= 2.8`.
pub fn rk4_step<T, S, F>(state: &S, rhs: &F, dt: T) -> S
where
    T: Real,
    S: OdeState<T>,
    F: Fn(&S) -> S,
{
    let half = dt * T::lit(0.5);
    let k1 = rhs(state);
    let k2 = rhs(&state.add_scaled(&k1, half));
    let k3 = rhs(&state.add_scaled(&k2, half));
    let k4 = rhs(&state.add_scaled(&k3, dt));
    state.rk4_combine([&k1, &k2, &k3, &k4], dt)
}

/// Sampled output of [`integrate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T, S> {
    pub times: Vec<T>,
    pub states: Vec<S>,
    pub sample_stride: usize,
}

impl<T: Copy, S> Trajectory<T, S> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(T, &S)> {
        self.times.last().copied().zip(self.states.last())
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, &S)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// How `[0, t_end]` is cut into steps: `full_steps` steps of `dt`, then one
/// shorter step of `remainder` if `t_end` is not a multiple of `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan<T> {
    pub dt: T,
    pub full_steps: usize,
    pub remainder: T,
}

impl<T: Real> StepPlan<T> {
    pub fn new(t_end: T, dt: T) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::invalid("time step", format!("dt must be positive, got {dt}")));
        }
        if !(t_end >= T::zero()) || !t_end.is_finite() {
            return Err(Error::invalid(
                "end time",
                format!("t_end must be non-negative, got {t_end}"),
            ));
        }
        let ratio = t_end / dt;
        let nearest = ratio.round();
        let tol = T::lit(1e-9) * ratio.max(T::one());
        let (full_steps, remainder) = if (ratio - nearest).abs() <= tol {
            (nearest, T::zero())
        } else {
            let n = ratio.floor();
            (n, t_end - n * dt)
        };
        let full_steps = full_steps
            .to_usize()
            .ok_or_else(|| Error::invalid("time step", "too many steps"))?;
        Ok(Self {
            dt,
            full_steps,
            remainder,
        })
    }

    pub fn total_steps(&self) -> usize {
        self.full_steps + usize::from(self.remainder > T::zero())
    }

    /// Number of samples produced with the given stride.
    pub fn sample_count(&self, stride: usize) -> usize {
        let on_stride = self.full_steps / stride + 1;
        let ends_on_stride = self.full_steps.is_multiple_of(stride) && self.remainder == T::zero();
        on_stride + usize::from(!ends_on_stride)
    }
}

/// Integrates from `t = 0` to `t_end` with fixed steps, keeping every
/// `sample_stride`-th state plus the initial and final ones.
pub fn integrate<T, S, F>(
    initial: S,
    rhs: F,
    t_end: T,
    dt: T,
    sample_stride: usize,
) -> Result<Trajectory<T, S>>
where
    T: Real,
    S: OdeState<T>,
    F: Fn(&S) -> S,
{
    integrate_with(initial, rhs, t_end, dt, sample_stride, |_, _| Ok(()))
}

/// [`integrate`] with a hook run after every step. The hook may modify the
/// state (e.g. a projection) or abort the run by returning an error.
pub fn integrate_with<T, S, F, P>(
    initial: S,
    rhs: F,
    t_end: T,
    dt: T,
    sample_stride: usize,
    mut after_step: P,
) -> Result<Trajectory<T, S>>
where
    T: Real,
    S: OdeState<T>,
    F: Fn(&S) -> S,
    P: FnMut(T, &mut S) -> Result<()>,
{
    if sample_stride == 0 {
        return Err(Error::invalid("sample stride", "must be at least 1"));
    }
    if !initial.is_finite() {
        return Err(Error::invalid("initial state", "must be finite"));
    }
    let plan = StepPlan::new(t_end, dt)?;
    let mut times = Vec::with_capacity(plan.sample_count(sample_stride));
    let mut states = Vec::with_capacity(times.capacity());
    times.push(T::zero());
    states.push(initial.clone());

    let mut state = initial;
    let mut t = T::zero();
    let mut advance = |state: &S, h: T, t: T| -> Result<S> {
        let mut next = rk4_step(state, &rhs, h);
        if !next.is_finite() {
            return Err(Error::BlowUp {
                time: t.as_f64(),
                mode: None,
            });
        }
        after_step(t, &mut next)?;
        Ok(next)
    };

    for step in 1..=plan.full_steps {
        t = T::from_usize(step).expect("step count fits scalar") * plan.dt;
        state = advance(&state, plan.dt, t)?;
        if step % sample_stride == 0 {
            times.push(t);
            states.push(state.clone());
        }
    }
    if plan.remainder > T::zero() {
        state = advance(&state, plan.remainder, t_end)?;
        t = t_end;
    }
    if *times.last().expect("initial sample") != t {
        times.push(t);
        states.push(state);
    }
    Ok(Trajectory {
        times,
        states,
        sample_stride,
    })
}

/// Default step for a system whose fastest angular frequency is `omega_max`.
pub fn default_dt<T: Real>(omega_max: T) -> T {
    T::TAU() / (T::lit(2.0) * omega_max) / T::lit(50.0)
}

/// Least-squares slope of `ln(error)` against `ln(dt)`.
///
/// Requires at least three points with successive step sizes halving.
pub fn convergence_order<T: Real>(samples: &[(T, T)]) -> Result<T> {
    if samples.len() < 3 {
        return Err(Error::invalid(
            "convergence data",
            format!("need at least 3 (dt, error) pairs, got {}", samples.len()),
        ));
    }
    for &(dt, err) in samples {
        if !(dt > T::zero()) || !(err > T::zero()) || !err.is_finite() || !dt.is_finite() {
            return Err(Error::invalid(
                "convergence data",
                format!("step sizes and errors must be positive and finite, got ({dt}, {err})"),
            ));
        }
    }
    for pair in samples.windows(2) {
        let ratio = pair[0].0 / pair[1].0;
        if (ratio - T::lit(2.0)).abs() > T::lit(1e-9) {
            return Err(Error::invalid(
                "convergence data",
                format!("step sizes must halve, got ratio {ratio}"),
            ));
        }
    }
    let n = T::from_usize(samples.len()).expect("small count");
    let (xs, ys): (Vec<T>, Vec<T>) = samples.iter().map(|&(h, e)| (h.ln(), e.ln())).unzip();
    let mean_x = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let mean_y = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let (sxy, sxx) = xs
        .iter()
        .zip(&ys)
        .fold((T::zero(), T::zero()), |(sxy, sxx), (&x, &y)| {
            (
                sxy + (x - mean_x) * (y - mean_y),
                sxx + (x - mean_x) * (x - mean_x),
            )
        });
    Ok(sxy / sxx)
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope<T: Real>(xs: &[T], ys: &[T]) -> T {
    let n = T::from_usize(xs.len()).expect("small count");
    let mean_x = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let mean_y = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxy = sxy + (x - mean_x) * (y - mean_y);
        sxx = sxx + (x - mean_x) * (x - mean_x);
    }
    sxy / sxx
}
