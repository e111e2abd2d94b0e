//! Analytic and numerical laboratory for the Newton-Schrödinger-Bohm pilot-wave
//! equation.
//!
//! Every numerical routine is generic over the real scalar ([`Real`], i.e. `f32`
//! or `f64`); the aliases at the crate root fix the double-precision types the
//! scenario runner uses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod constants;
pub mod error;
pub mod integrator;
pub mod pde;
pub mod scalar;
pub mod scenarios;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;

pub type PhysicalConstants64 = constants::PhysicalConstants<f64>;
pub type DerivedScales64 = constants::DerivedScales<f64>;
pub type EquationParameters64 = analytic::EquationParameters<f64>;
pub type CanonicalCoefficients64 = analytic::CanonicalCoefficients<f64>;
pub type CharacteristicRoots64 = analytic::CharacteristicRoots<f64>;
pub type TemporalState64 = integrator::TemporalState<f64>;
pub type TemporalState32 = integrator::TemporalState<f32>;
pub type Grid64 = pde::Grid<f64>;
pub type ComplexField64 = pde::ComplexField<f64>;
pub type FieldState64 = pde::FieldState<f64>;
pub type FieldState32 = pde::FieldState<f32>;
pub type PdeProblem64 = pde::PdeProblem<f64>;
