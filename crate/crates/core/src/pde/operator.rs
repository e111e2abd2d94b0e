use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::grid::{ComplexField, Grid, Spectral};
use crate::scalar::Real;

/// Discretisation of the Laplacian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianKind {
    /// Second-order central difference with periodic wrap.
    #[default]
    Stencil,
    /// Exact multiplication by `-k^2` in Fourier space.
    Spectral,
}

/// Periodic Laplacian on a fixed grid, with the FFT plans it needs.
#[derive(Debug, Clone)]
pub struct Laplacian<T: Real> {
    grid: Grid<T>,
    kind: LaplacianKind,
    spectral: Spectral<T>,
    eigenvalues: Vec<T>,
}

impl<T: Real> Laplacian<T> {
    pub fn new(grid: Grid<T>, kind: LaplacianKind) -> Self {
        let eigenvalues = (0..grid.n())
            .map(|j| eigenvalue(&grid, kind, j))
            .collect();
        Self {
            grid,
            kind,
            spectral: Spectral::new(grid.n()),
            eigenvalues,
        }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn kind(&self) -> LaplacianKind {
        self.kind
    }

    pub fn spectral(&self) -> &Spectral<T> {
        &self.spectral
    }

    /// Eigenvalue for FFT bin `j` (non-positive).
    pub fn eigenvalue(&self, j: usize) -> T {
        self.eigenvalues[j]
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn apply(&self, values: &[Complex<T>]) -> Vec<Complex<T>> {
        match self.kind {
            LaplacianKind::Stencil => stencil(values, self.grid.dx()),
            LaplacianKind::Spectral => self.spectral.filter(values, |j| self.eigenvalues[j]),
        }
    }

    pub fn apply_field(&self, field: &ComplexField<T>) -> ComplexField<T> {
        ComplexField::from_raw(*field.grid(), self.apply(field.values()))
    }
}

/// Eigenvalue of the chosen Laplacian on Fourier mode `j`.
pub fn eigenvalue<T: Real>(grid: &Grid<T>, kind: LaplacianKind, j: usize) -> T {
    let k = grid.wavenumber(j);
    match kind {
        LaplacianKind::Stencil => {
            let dx = grid.dx();
            -(T::lit(2.0) / (dx * dx)) * (T::one() - (k * dx).cos())
        }
        LaplacianKind::Spectral => -k * k,
    }
}

fn stencil<T: Real>(values: &[Complex<T>], dx: T) -> Vec<Complex<T>> {
    let n = values.len();
    let inv = (dx * dx).recip();
    let two = T::lit(2.0);
    (0..n)
        .map(|j| {
            let left = values[(j + n - 1) % n];
            let right = values[(j + 1) % n];
            (left - values[j] * two + right) * inv
        })
        .collect()
}

/// Second-order periodic stencil `(f[j-1] - 2 f[j] + f[j+1]) / dx^2`.
pub fn laplacian<T: Real>(field: &ComplexField<T>) -> ComplexField<T> {
    ComplexField::from_raw(*field.grid(), stencil(field.values(), field.grid().dx()))
}

/// Fourier-space Laplacian (plans a transform on every call).
pub fn spectral_laplacian<T: Real>(field: &ComplexField<T>) -> ComplexField<T> {
    Laplacian::new(*field.grid(), LaplacianKind::Spectral).apply_field(field)
}
