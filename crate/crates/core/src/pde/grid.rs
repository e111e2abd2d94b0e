use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::integrator::{rk4_point, OdeState};
use crate::scalar::{is_finite_c, Real};

/// Uniform periodic grid on `[0, length)` in Planck lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    n: usize,
    length: T,
}

impl<T: Real> Grid<T> {
    /// `n` must be a power of two, at least 8.
    pub fn new(n: usize, length: T) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::invalid(
                "grid size",
                format!("n must be a power of two >= 8, got {n}"),
            ));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::invalid(
                "domain length",
                format!("must be positive, got {length}"),
            ));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn dx(&self) -> T {
        self.length / self.scalar(self.n)
    }

    pub fn x(&self, j: usize) -> T {
        self.scalar(j) * self.dx()
    }

    pub fn positions(&self) -> Vec<T> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Signed mode number of FFT bin `j`; the Nyquist bin maps to `+n/2`.
    pub fn mode_number(&self, j: usize) -> i64 {
        let j = j as i64;
        let n = self.n as i64;
        if j <= n / 2 {
            j
        } else {
            j - n
        }
    }

    /// Wavenumber `2 pi m / L` of FFT bin `j`.
    pub fn wavenumber(&self, j: usize) -> T {
        T::TAU() * T::lit(self.mode_number(j) as f64) / self.length
    }

    pub fn wavenumbers(&self) -> Vec<T> {
        (0..self.n).map(|j| self.wavenumber(j)).collect()
    }

    /// FFT bin holding mode number `m`.
    pub fn bin(&self, m: i64) -> usize {
        m.rem_euclid(self.n as i64) as usize
    }

    fn scalar(&self, j: usize) -> T {
        T::from_usize(j).expect("grid index fits scalar")
    }
}

/// Complex samples of a field on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField<T> {
    values: Vec<Complex<T>>,
    grid: Grid<T>,
}

impl<T: Real> ComplexField<T> {
    pub fn new(grid: Grid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::invalid(
                "field",
                format!("{} values for a grid of {} points", values.len(), grid.n()),
            ));
        }
        if !values.iter().all(|&z| is_finite_c(z)) {
            return Err(Error::invalid("field", "values must be finite"));
        }
        Ok(Self { values, grid })
    }

    pub(crate) fn from_raw(grid: Grid<T>, values: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        Self { values, grid }
    }

    pub fn from_fn(grid: Grid<T>, f: impl Fn(T) -> Complex<T>) -> Self {
        let values = (0..grid.n()).map(|j| f(grid.x(j))).collect();
        Self { values, grid }
    }

    pub fn constant(grid: Grid<T>, value: Complex<T>) -> Self {
        Self {
            values: vec![value; grid.n()],
            grid,
        }
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        Self::constant(grid, Complex::new(T::zero(), T::zero()))
    }

    /// `exp(i k_m x)` for mode number `m`.
    pub fn plane_wave(grid: Grid<T>, m: i64) -> Self {
        let k = grid.wavenumber(grid.bin(m));
        Self::from_fn(grid, |x| Complex::new(T::zero(), k * x).exp())
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|&z| is_finite_c(z))
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self::from_raw(self.grid, self.values.iter().map(|&z| f(z)).collect())
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        self.map(|z| z * factor)
    }

    /// `sqrt(sum |psi|^2 dx)`
    pub fn l2_norm(&self) -> T {
        let sum = self.values.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        (sum * self.grid.dx()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Largest pointwise distance to `other`.
    pub fn sup_distance(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// Fourier coefficient `(1/n) sum_j psi_j exp(-i k_m x_j)` by direct summation.
    pub fn mode_amplitude(&self, m: i64) -> Complex<T> {
        let k = self.grid.wavenumber(self.grid.bin(m));
        let sum = self
            .values
            .iter()
            .enumerate()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (j, &z)| {
                acc + z * Complex::new(T::zero(), -k * self.grid.x(j)).exp()
            });
        sum / T::from_usize(self.grid.n()).expect("grid size fits scalar")
    }

    /// Centre of mass of `|psi|^2`.
    pub fn mean_position(&self) -> T {
        let (num, den) = self.weighted(|x| x);
        num / den
    }

    /// Standard deviation of position under `|psi|^2`.
    pub fn rms_width(&self) -> T {
        let mean = self.mean_position();
        let (num, den) = self.weighted(|x| (x - mean) * (x - mean));
        (num / den).sqrt()
    }

    fn weighted(&self, f: impl Fn(T) -> T) -> (T, T) {
        self.values
            .iter()
            .enumerate()
            .fold((T::zero(), T::zero()), |(num, den), (j, z)| {
                let w = z.norm_sqr();
                (num + w * f(self.grid.x(j)), den + w)
            })
    }
}

/// `(psi, dpsi/dt)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState<T> {
    pub psi: ComplexField<T>,
    pub dpsi_dt: ComplexField<T>,
}

impl<T: Real> FieldState<T> {
    pub fn new(psi: ComplexField<T>, dpsi_dt: ComplexField<T>) -> Result<Self> {
        if psi.grid() != dpsi_dt.grid() {
            return Err(Error::invalid("field state", "psi and dpsi_dt live on different grids"));
        }
        Ok(Self { psi, dpsi_dt })
    }

    /// Spatially constant state.
    pub fn uniform(grid: Grid<T>, psi: Complex<T>, dpsi_dt: Complex<T>) -> Self {
        Self {
            psi: ComplexField::constant(grid, psi),
            dpsi_dt: ComplexField::constant(grid, dpsi_dt),
        }
    }

    pub fn grid(&self) -> &Grid<T> {
        self.psi.grid()
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            psi: self.psi.scale(factor),
            dpsi_dt: self.dpsi_dt.scale(factor),
        }
    }
}

impl<T: Real> OdeState<T> for FieldState<T> {
    fn add_scaled(&self, k: &Self, h: T) -> Self {
        let axpy = |y: &ComplexField<T>, d: &ComplexField<T>| {
            ComplexField::from_raw(
                y.grid,
                y.values.iter().zip(&d.values).map(|(&a, &b)| a + b * h).collect(),
            )
        };
        Self {
            psi: axpy(&self.psi, &k.psi),
            dpsi_dt: axpy(&self.dpsi_dt, &k.dpsi_dt),
        }
    }

    fn rk4_combine(&self, k: [&Self; 4], h: T) -> Self {
        let combine = |pick: fn(&Self) -> &ComplexField<T>| {
            let y = pick(self);
            let ks = k.map(|s| &pick(s).values);
            let values = (0..y.values.len())
                .map(|j| rk4_point(y.values[j], ks[0][j], ks[1][j], ks[2][j], ks[3][j], h))
                .collect();
            ComplexField::from_raw(y.grid, values)
        };
        Self {
            psi: combine(|s| &s.psi),
            dpsi_dt: combine(|s| &s.dpsi_dt),
        }
    }

    fn is_finite(&self) -> bool {
        self.psi.is_finite() && self.dpsi_dt.is_finite()
    }
}

/// Planned forward/inverse FFTs for one grid size.
#[derive(Clone)]
pub struct Spectral<T: Real> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    n: usize,
}

impl<T: Real> std::fmt::Debug for Spectral<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).finish()
    }
}

impl<T: Real> Spectral<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            n,
        }
    }

    /// Unnormalised forward transform.
    pub fn forward(&self, values: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse transform including the `1/n` factor.
    pub fn inverse(&self, coefficients: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut buf = coefficients.to_vec();
        self.inverse.process(&mut buf);
        let scale = T::from_usize(self.n).expect("grid size fits scalar").recip();
        buf.iter_mut().for_each(|z| *z = *z * scale);
        buf
    }

    /// Applies a per-bin multiplier in Fourier space.
    pub fn filter(&self, values: &[Complex<T>], multiplier: impl Fn(usize) -> T) -> Vec<Complex<T>> {
        let mut coeffs = self.forward(values);
        coeffs
            .iter_mut()
            .enumerate()
            .for_each(|(j, z)| *z = *z * multiplier(j));
        self.inverse(&coeffs)
    }
}
