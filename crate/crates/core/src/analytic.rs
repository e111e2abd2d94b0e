//! Closed-form results for the pilot-wave equation in Planck units.
//!
//! In dimensionless form (t in Planck times, x in Planck lengths, energies in
//! units of M_P c^2, r = M_P / m, v = V / (M_P c^2)) the equation reads
//!
//! ```text
//! i psi_t = -(r/2) psi_xx + v psi - (1/2) psi_xx + (1/2) (psi_xx - psi_tt)
//! ```
//!
//! The two Planck-scale Laplacian terms cancel, leaving the canonical form
//! `i a_t psi_t = -(a_xx/2) psi_xx - (a_tt/2) psi_tt + v psi` with `a_t = 1`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{i, Real};

/// Default mass-ratio separation between the regimes: two decades.
pub const DEFAULT_REGIME_THRESHOLD: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// m << M_P
    Microscopic,
    /// m >> M_P
    Macroscopic,
    Intermediate,
}

/// Classifies the mass ratio `r = M_P / m` against `threshold`.
pub fn classify_regime<T: Real>(r: T, threshold: T) -> Result<Regime> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::invalid("mass ratio", format!("r must be positive, got {r}")));
    }
    if !(threshold > T::one()) {
        return Err(Error::invalid(
            "regime threshold",
            format!("must exceed 1, got {threshold}"),
        ));
    }
    Ok(if r >= threshold {
        Regime::Microscopic
    } else if r <= threshold.recip() {
        Regime::Macroscopic
    } else {
        Regime::Intermediate
    })
}

/// Which variant of the equation is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationForm {
    /// All terms of the full equation.
    Full,
    /// m << M_P reduction. Keeps the particle kinetic term and the telegraph correction.
    Microscopic,
    /// m >> M_P reduction. The particle kinetic term is dropped.
    Macroscopic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquationParameters<T> {
    /// M_P / m
    pub r: T,
    /// V / (M_P c^2)
    pub v: T,
    pub form: EquationForm,
}

impl<T: Real> EquationParameters<T> {
    /// Builds parameters without checking that `form` matches the regime of `r`,
    /// so the reduced coefficient sets can be used as presets at any mass ratio.
    pub fn new(r: T, v: T, form: EquationForm) -> Result<Self> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::invalid("mass ratio", format!("r must be positive, got {r}")));
        }
        if !v.is_finite() {
            return Err(Error::invalid("potential", "v must be finite"));
        }
        Ok(Self { r, v, form })
    }

    /// Like [`EquationParameters::new`] but rejects a reduced form used outside its regime.
    pub fn checked(r: T, v: T, form: EquationForm, threshold: T) -> Result<Self> {
        let params = Self::new(r, v, form)?;
        let regime = classify_regime(r, threshold)?;
        match (form, regime) {
            (EquationForm::Macroscopic, Regime::Macroscopic)
            | (EquationForm::Microscopic, Regime::Microscopic)
            | (EquationForm::Full, _) => Ok(params),
            (form, regime) => Err(Error::invalid(
                "equation form",
                format!("{form:?} form requested for r = {r} which is {regime:?}"),
            )),
        }
    }

    pub fn full(r: T, v: T) -> Result<Self> {
        Self::new(r, v, EquationForm::Full)
    }
}

/// Coefficients of `i a_t psi_t = -(a_xx/2) psi_xx - (a_tt/2) psi_tt + v psi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalCoefficients<T> {
    pub a_t: T,
    pub a_xx: T,
    pub a_tt: T,
    pub v: T,
}

/// Spectral stability of a coefficient set, in terms of `kappa = k^2`
/// (or minus the discrete Laplacian eigenvalue).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralStability<T> {
    AllStable,
    AllUnstable,
    /// Modes with kappa above this value grow.
    StableBelow(T),
}

/// The two plane-wave frequencies of one mode; `psi ~ exp(i (k x - omega t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFrequencies<T> {
    /// Slow (Schrodinger) branch.
    pub slow: Complex<T>,
    /// Fast (Planck) branch; absent when `a_tt = 0`.
    pub fast: Option<Complex<T>>,
}

impl<T: Real> CanonicalCoefficients<T> {
    pub fn new(a_xx: T, a_tt: T, v: T) -> Result<Self> {
        for (name, value) in [("a_xx", a_xx), ("a_tt", a_tt)] {
            if !(value >= T::zero()) || !value.is_finite() {
                return Err(Error::invalid(
                    "coefficient",
                    format!("{name} must be finite and non-negative, got {value}"),
                ));
            }
        }
        if !v.is_finite() {
            return Err(Error::invalid("potential", "v must be finite"));
        }
        Ok(Self {
            a_t: T::one(),
            a_xx,
            a_tt,
            v,
        })
    }

    /// Free Schrodinger equation `i psi_t = -(r/2) psi_xx + v psi`.
    pub fn schrodinger(r: T, v: T) -> Result<Self> {
        Self::new(r, T::zero(), v)
    }

    /// Same coefficients with the second-time-derivative weight replaced.
    pub fn with_a_tt(self, a_tt: T) -> Result<Self> {
        Self::new(self.a_xx, a_tt, self.v)
    }

    /// Frequencies of the mode with `kappa = -lambda`, where `lambda` is the
    /// Laplacian eigenvalue (`kappa = k^2` in the continuum).
    pub fn mode_frequencies(&self, kappa: T) -> ModeFrequencies<T> {
        let two = T::lit(2.0);
        let c = self.a_xx * kappa + two * self.v;
        if self.a_tt == T::zero() {
            return ModeFrequencies {
                slow: Complex::new(c / two, T::zero()),
                fast: None,
            };
        }
        let disc = Complex::new(T::one() - self.a_tt * c, T::zero());
        let root = disc.sqrt();
        let one = Complex::new(T::one(), T::zero());
        // (1 - root) / a_tt rewritten to stay accurate as a_tt -> 0.
        let slow = Complex::new(c, T::zero()) / (one + root);
        let fast = (one + root) / self.a_tt;
        ModeFrequencies {
            slow,
            fast: Some(fast),
        }
    }

    pub fn stability(&self) -> SpectralStability<T> {
        if self.a_tt == T::zero() {
            return SpectralStability::AllStable;
        }
        let two = T::lit(2.0);
        let headroom = self.a_tt.recip() - two * self.v;
        if headroom <= T::zero() {
            return SpectralStability::AllUnstable;
        }
        if self.a_xx == T::zero() {
            return SpectralStability::AllStable;
        }
        SpectralStability::StableBelow(headroom / self.a_xx)
    }

    /// Critical wavenumber `sqrt(kappa_crit)`; `None` when every mode is stable.
    pub fn critical_wavenumber(&self) -> Option<T> {
        match self.stability() {
            SpectralStability::AllStable => None,
            SpectralStability::AllUnstable => Some(T::zero()),
            SpectralStability::StableBelow(kappa) => Some(kappa.sqrt()),
        }
    }
}

/// One additive term on the right-hand side of the equation, written as a
/// multiple of `psi_xx` and of `psi_tt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term<T> {
    pub label: &'static str,
    pub spatial: T,
    pub temporal: T,
}

/// The right-hand-side terms exactly as they appear in each form, before any
/// cancellation. The potential term is carried separately.
pub fn literal_terms<T: Real>(form: EquationForm, r: T) -> Vec<Term<T>> {
    let half = T::lit(0.5);
    let kinetic = Term {
        label: "-(hbar^2/2m) laplacian",
        spatial: -half * r,
        temporal: T::zero(),
    };
    let planck_kinetic = Term {
        label: "-(hbar^2/2M_P) laplacian",
        spatial: -half,
        temporal: T::zero(),
    };
    let telegraph_space = Term {
        label: "+(hbar^2/2M_P) laplacian",
        spatial: half,
        temporal: T::zero(),
    };
    let telegraph_time = Term {
        label: "-(hbar^2/2M_P c^2) d2/dt2",
        spatial: T::zero(),
        temporal: -half,
    };
    match form {
        EquationForm::Full | EquationForm::Microscopic => {
            vec![kinetic, planck_kinetic, telegraph_space, telegraph_time]
        }
        EquationForm::Macroscopic => vec![planck_kinetic, telegraph_space, telegraph_time],
    }
}

/// The same forms after the Planck-scale Laplacian pair has been cancelled.
pub fn reduced_terms<T: Real>(form: EquationForm, r: T) -> Vec<Term<T>> {
    let half = T::lit(0.5);
    let telegraph_time = Term {
        label: "-(hbar^2/2M_P c^2) d2/dt2",
        spatial: T::zero(),
        temporal: -half,
    };
    match form {
        EquationForm::Full | EquationForm::Microscopic => vec![
            Term {
                label: "-(hbar^2/2m) laplacian",
                spatial: -half * r,
                temporal: T::zero(),
            },
            telegraph_time,
        ],
        EquationForm::Macroscopic => vec![telegraph_time],
    }
}

/// Collects a term list into canonical coefficients.
///
/// Uses compensated summation so that cancelling pairs drop out exactly and a
/// tiny kinetic coefficient survives unchanged.
pub fn assemble<T: Real>(terms: &[Term<T>], v: T) -> Result<CanonicalCoefficients<T>> {
    let minus_two = T::lit(-2.0);
    let spatial = compensated_sum(terms.iter().map(|t| t.spatial));
    let temporal = compensated_sum(terms.iter().map(|t| t.temporal));
    CanonicalCoefficients::new(minus_two * spatial, minus_two * temporal, v)
}

// Neumaier's variant of Kahan summation.
fn compensated_sum<T: Real>(values: impl Iterator<Item = T>) -> T {
    let (sum, carry) = values.fold((T::zero(), T::zero()), |(sum, carry), x| {
        let t = sum + x;
        let lost = if sum.abs() >= x.abs() {
            (sum - t) + x
        } else {
            (x - t) + sum
        };
        (t, carry + lost)
    });
    sum + carry
}

pub fn reduce_equation<T: Real>(params: &EquationParameters<T>) -> Result<CanonicalCoefficients<T>> {
    assemble(&literal_terms(params.form, params.r), params.v)
}

/// Roots of `gamma^2/2 + i gamma - v = 0` for the ansatz `psi = exp(gamma t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoots<T> {
    pub gamma1: Complex<T>,
    pub gamma2: Complex<T>,
    /// `-1 + 2 v`
    pub discriminant: Complex<T>,
    pub stable: bool,
}

impl<T: Real> CharacteristicRoots<T> {
    pub fn roots(&self) -> [Complex<T>; 2] {
        [self.gamma1, self.gamma2]
    }

    /// Largest real part, i.e. the exponential growth rate of a generic solution.
    pub fn growth_rate(&self) -> T {
        self.gamma1.re.max(self.gamma2.re)
    }
}

/// `gamma^2/2 + i gamma - v`.
pub fn characteristic_residual<T: Real>(gamma: Complex<T>, v: T) -> Complex<T> {
    gamma * gamma * T::lit(0.5) + i::<T>() * gamma - v
}

/// `gamma_{1,2} = -i +/- sqrt(-1 + 2 v)`, principal square root.
pub fn characteristic_roots<T: Real>(v: T) -> CharacteristicRoots<T> {
    let discriminant = Complex::new(T::lit(2.0) * v - T::one(), T::zero());
    let root = discriminant.sqrt();
    let minus_i = -i::<T>();
    CharacteristicRoots {
        gamma1: minus_i + root,
        gamma2: minus_i - root,
        discriminant,
        stable: v <= T::lit(0.5),
    }
}

/// `psi(t) = A + B exp(-2 i t)`, the general solution of the free macroscopic equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSolutionSpec<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
}

impl<T: Real> FreeSolutionSpec<T> {
    pub fn new(a: Complex<T>, b: Complex<T>) -> Self {
        Self { a, b }
    }

    /// The solution with `psi(0) = 0`, which forces `B = -A`.
    pub fn vanishing_at_origin(a: Complex<T>) -> Self {
        Self { a, b: -a }
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.a + self.b == Complex::new(T::zero(), T::zero())
    }

    fn phase(t: T) -> Complex<T> {
        Complex::new(T::zero(), T::lit(-2.0) * t).exp()
    }

    pub fn value(&self, t: T) -> Complex<T> {
        self.a + self.b * Self::phase(t)
    }

    pub fn derivative(&self, t: T) -> Complex<T> {
        self.b * Self::phase(t) * Complex::new(T::zero(), T::lit(-2.0))
    }

    pub fn second_derivative(&self, t: T) -> Complex<T> {
        self.b * Self::phase(t) * T::lit(-4.0)
    }
}

/// `A (1 - exp(-2 i t))`.
pub fn free_solution<T: Real>(a: Complex<T>, t: T) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    a * (one - FreeSolutionSpec::<T>::phase(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionQuery<T> {
    pub k_hat: T,
    pub params: EquationParameters<T>,
}

/// Plane-wave roots of `omega^2/2 - omega + (r/2) k^2 + v = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRoots<T> {
    /// Planck branch, `1 + sqrt(1 - r k^2 - 2 v)`.
    pub plus: Complex<T>,
    /// Schrodinger branch, `1 - sqrt(1 - r k^2 - 2 v)`.
    pub minus: Complex<T>,
}

pub fn dispersion_roots<T: Real>(query: &DispersionQuery<T>) -> Result<DispersionRoots<T>> {
    if !query.k_hat.is_finite() {
        return Err(Error::invalid("wavenumber", "k_hat must be finite"));
    }
    let coeffs = reduce_equation(&query.params)?;
    let freqs = coeffs.mode_frequencies(query.k_hat * query.k_hat);
    Ok(DispersionRoots {
        plus: freqs.fast.expect("reduced forms keep the second time derivative"),
        minus: freqs.slow,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalWavenumber<T> {
    /// Modes with `k_hat` above this value grow exponentially.
    Finite(T),
    /// `v >= 1/2`: even the uniform mode grows.
    AllUnstable,
}

/// `sqrt((1 - 2 v) / r)` for the full equation.
pub fn critical_wavenumber<T: Real>(params: &EquationParameters<T>) -> CriticalWavenumber<T> {
    let headroom = T::one() - T::lit(2.0) * params.v;
    if headroom <= T::zero() {
        CriticalWavenumber::AllUnstable
    } else {
        CriticalWavenumber::Finite((headroom / params.r).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn regime_examples() {
        assert_eq!(classify_regime(1e4, 100.0).unwrap(), Regime::Microscopic);
        assert_eq!(classify_regime(1e-4, 100.0).unwrap(), Regime::Macroscopic);
        assert_eq!(classify_regime(1.0, 100.0).unwrap(), Regime::Intermediate);
        assert_eq!(classify_regime(100.0, 100.0).unwrap(), Regime::Microscopic);
        assert_eq!(classify_regime(0.01, 100.0).unwrap(), Regime::Macroscopic);
        assert!(classify_regime(0.0, 100.0).is_err());
        assert!(classify_regime(-1.0, 100.0).is_err());
        assert!(classify_regime(1.0, 1.0).is_err());
    }

    #[test]
    fn checked_parameters_enforce_regime() {
        assert!(EquationParameters::checked(1e-3, 0.0, EquationForm::Macroscopic, 100.0).is_ok());
        assert!(EquationParameters::checked(1.0, 0.0, EquationForm::Macroscopic, 100.0).is_err());
        assert!(EquationParameters::checked(1.0, 0.0, EquationForm::Microscopic, 100.0).is_err());
        assert!(EquationParameters::checked(1e3, 0.0, EquationForm::Microscopic, 100.0).is_ok());
        assert!(EquationParameters::checked(1.0, 0.0, EquationForm::Full, 100.0).is_ok());
        assert!(EquationParameters::new(0.0, 0.0, EquationForm::Full).is_err());
        assert!(EquationParameters::new(1.0, f64::NAN, EquationForm::Full).is_err());
    }

    #[test]
    fn reduce_examples() {
        let full = reduce_equation(&EquationParameters::full(1.0, 0.0).unwrap()).unwrap();
        assert_eq!((full.a_t, full.a_xx, full.a_tt, full.v), (1.0, 1.0, 1.0, 0.0));

        for r in [1e-6, 1e-3, 0.5, 7.0] {
            let macro_ = reduce_equation(
                &EquationParameters::new(r, 0.3, EquationForm::Macroscopic).unwrap(),
            )
            .unwrap();
            assert_eq!((macro_.a_xx, macro_.a_tt, macro_.v), (0.0, 1.0, 0.3));
        }

        let micro =
            reduce_equation(&EquationParameters::new(1e3, 0.1, EquationForm::Microscopic).unwrap())
                .unwrap();
        assert_eq!((micro.a_xx, micro.a_tt), (1e3, 1.0));

        for r in [1e-2, 1e-5, 1e-9] {
            let c = reduce_equation(&EquationParameters::full(r, 0.0).unwrap()).unwrap();
            assert_eq!(c.a_xx, r);
            assert_eq!(c.a_tt, 1.0);
        }
    }

    #[test]
    fn literal_and_reduced_assemblies_agree() {
        for form in [
            EquationForm::Full,
            EquationForm::Microscopic,
            EquationForm::Macroscopic,
        ] {
            for r in [1e-4, 0.3, 1.0, 250.0] {
                let literal = assemble(&literal_terms(form, r), 0.2).unwrap();
                let reduced = assemble(&reduced_terms(form, r), 0.2).unwrap();
                assert_eq!(literal, reduced, "{form:?} r={r}");
            }
        }
        assert_eq!(literal_terms::<f64>(EquationForm::Full, 1.0).len(), 4);
    }

    #[test]
    fn free_particle_roots_are_exact() {
        let roots = characteristic_roots(0.0);
        assert_eq!(roots.gamma1, C::new(0.0, 0.0));
        assert_eq!(roots.gamma2, C::new(0.0, -2.0));
        assert!(roots.stable);
    }

    #[test]
    fn double_root_at_half() {
        let roots = characteristic_roots(0.5);
        assert_eq!(roots.gamma1, C::new(0.0, -1.0));
        assert_eq!(roots.gamma2, C::new(0.0, -1.0));
        assert!(roots.stable);
    }

    #[test]
    fn unit_potential_roots() {
        let roots = characteristic_roots(1.0);
        assert!(close(roots.gamma1, C::new(1.0, -1.0), 1e-15));
        assert!(close(roots.gamma2, C::new(-1.0, -1.0), 1e-15));
        assert!(!roots.stable);
        assert_eq!(roots.growth_rate(), 1.0);
    }

    #[test]
    fn stability_flips_at_half() {
        assert!(characteristic_roots(0.5 - 1e-9).stable);
        assert!(!characteristic_roots(0.5 + 1e-9).stable);
        assert!(characteristic_roots(0.5 + 1e-9).growth_rate() > 0.0);
        assert_eq!(characteristic_roots(0.5 - 1e-9).growth_rate(), 0.0);
    }

    #[test]
    fn free_solution_examples() {
        let one = C::new(1.0, 0.0);
        assert_eq!(free_solution(one, 0.0), C::new(0.0, 0.0));
        assert!(close(free_solution(one, PI / 2.0), C::new(2.0, 0.0), 1e-15));
        assert!(close(free_solution(one, PI / 4.0), C::new(1.0, 1.0), 1e-15));
        let sol = FreeSolutionSpec::vanishing_at_origin(C::new(0.3, -1.2));
        assert!(sol.vanishes_at_origin());
        assert!(!FreeSolutionSpec::new(one, one).vanishes_at_origin());
        assert_eq!(sol.value(0.7), free_solution(sol.a, 0.7));
    }

    #[test]
    fn dispersion_examples() {
        let query = |k, v, r| DispersionQuery {
            k_hat: k,
            params: EquationParameters::full(r, v).unwrap(),
        };
        let d = dispersion_roots(&query(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(d.plus, C::new(2.0, 0.0));
        assert_eq!(d.minus, C::new(0.0, 0.0));

        // r k^2 + 2 v = 1
        let d = dispersion_roots(&query(0.5, 0.375, 1.0)).unwrap();
        assert!(close(d.plus, C::new(1.0, 0.0), 1e-15));
        assert!(close(d.minus, C::new(1.0, 0.0), 1e-15));

        let d = dispersion_roots(&query(0.2, 0.0, 1.0)).unwrap();
        let expected = 1.0 - 0.96f64.sqrt();
        assert!((d.minus.re - expected).abs() < 1e-15);
        assert!((d.minus.re - 0.020204).abs() < 1e-6);
        // residual substitution
        for w in [d.plus, d.minus] {
            let res = w * w * 0.5 - w + 0.5 * 0.04;
            assert!(res.norm() < 1e-15);
        }
    }

    #[test]
    fn unstable_branch_ordering() {
        let d = dispersion_roots(&DispersionQuery {
            k_hat: 1.5,
            params: EquationParameters::full(1.0, 0.0).unwrap(),
        })
        .unwrap();
        let growth = (1.25f64).sqrt();
        assert!(close(d.plus, C::new(1.0, growth), 1e-14));
        assert!(close(d.minus, C::new(1.0, -growth), 1e-14));
    }

    #[test]
    fn critical_wavenumber_examples() {
        let p = |r, v| EquationParameters::full(r, v).unwrap();
        assert_eq!(critical_wavenumber(&p(1.0, 0.0)), CriticalWavenumber::Finite(1.0));
        assert_eq!(critical_wavenumber(&p(0.25, 0.0)), CriticalWavenumber::Finite(2.0));
        assert_eq!(critical_wavenumber(&p(1.0, 0.375)), CriticalWavenumber::Finite(0.5));
        assert_eq!(critical_wavenumber(&p(1.0, 0.5)), CriticalWavenumber::AllUnstable);
        assert_eq!(critical_wavenumber(&p(1.0, 2.0)), CriticalWavenumber::AllUnstable);
    }

    #[test]
    fn coefficient_stability_classes() {
        let full = CanonicalCoefficients::new(1.0, 1.0, 0.0).unwrap();
        assert_eq!(full.stability(), SpectralStability::StableBelow(1.0));
        assert_eq!(full.critical_wavenumber(), Some(1.0));
        let macro_ = CanonicalCoefficients::new(0.0, 1.0, 0.2).unwrap();
        assert_eq!(macro_.stability(), SpectralStability::AllStable);
        let hot = CanonicalCoefficients::new(0.0, 1.0, 0.75).unwrap();
        assert_eq!(hot.stability(), SpectralStability::AllUnstable);
        let schr = CanonicalCoefficients::schrodinger(1.0, 0.0).unwrap();
        assert_eq!(schr.stability(), SpectralStability::AllStable);
        assert!(schr.mode_frequencies(4.0).fast.is_none());
        assert_eq!(schr.mode_frequencies(4.0).slow, C::new(2.0, 0.0));
        let eps = full.with_a_tt(0.25).unwrap();
        assert_eq!(eps.stability(), SpectralStability::StableBelow(4.0));
        assert!(CanonicalCoefficients::new(-1.0, 1.0, 0.0).is_err());
        assert!(CanonicalCoefficients::new(1.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn single_precision_roots() {
        let roots = characteristic_roots(0.0f32);
        assert_eq!(roots.gamma2, Complex::new(0.0f32, -2.0));
        assert!(characteristic_residual(roots.gamma1, 0.0f32).norm() < 1e-6);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn roots_satisfy_quadratic_and_vieta(v in -2.0f64..2.0) {
                let roots = characteristic_roots(v);
                for g in roots.roots() {
                    prop_assert!(characteristic_residual(g, v).norm() < 1e-12);
                }
                prop_assert!(close(roots.gamma1 + roots.gamma2, C::new(0.0, -2.0), 1e-12));
                prop_assert!(close(roots.gamma1 * roots.gamma2, C::new(-2.0 * v, 0.0), 1e-12));
                prop_assert_eq!(roots.stable, roots.growth_rate() <= 0.0);
            }

            #[test]
            fn dispersion_matches_roots_at_zero_wavenumber(v in -2.0f64..2.0) {
                let roots = characteristic_roots(v);
                let d = dispersion_roots(&DispersionQuery {
                    k_hat: 0.0,
                    params: EquationParameters::full(1.0, v).unwrap(),
                }).unwrap();
                // gamma = -i omega, matched as unordered pairs.
                let as_gamma = [d.plus * C::new(0.0, -1.0), d.minus * C::new(0.0, -1.0)];
                let direct = close(as_gamma[0], roots.gamma1, 1e-12) && close(as_gamma[1], roots.gamma2, 1e-12);
                let swapped = close(as_gamma[0], roots.gamma2, 1e-12) && close(as_gamma[1], roots.gamma1, 1e-12);
                prop_assert!(direct || swapped);
            }

            #[test]
            fn dispersion_matches_textbook_formula(k in -3.0f64..3.0, v in -1.0f64..1.0, r in 0.01f64..10.0) {
                let d = dispersion_roots(&DispersionQuery {
                    k_hat: k,
                    params: EquationParameters::full(r, v).unwrap(),
                }).unwrap();
                let root = C::new(1.0 - r * k * k - 2.0 * v, 0.0).sqrt();
                prop_assert!(close(d.plus, 1.0 + root, 1e-12));
                prop_assert!(close(d.minus, 1.0 - root, 1e-12));
                prop_assert!(d.plus.im >= 0.0);
            }

            #[test]
            fn free_solution_solves_macroscopic_equation(t in 0.0f64..1000.0, re in -3.0f64..3.0, im in -3.0f64..3.0) {
                let sol = FreeSolutionSpec::vanishing_at_origin(C::new(re, im));
                let residual = C::i() * sol.derivative(t) + sol.second_derivative(t) * 0.5;
                prop_assert!(residual.norm() < 1e-10);
            }

            #[test]
            fn free_solution_is_pi_periodic_and_bounded(t in 0.0f64..1000.0, a in 0.1f64..5.0) {
                let amp = C::new(a, 0.0);
                let here = free_solution(amp, t);
                let later = free_solution(amp, t + PI);
                prop_assert!((here - later).norm() < 1e-12 * a.max(1.0));
                let scaled = here / a;
                prop_assert!(scaled.re >= -1e-15 && scaled.re <= 2.0 + 1e-15);
                prop_assert!(scaled.norm() <= 2.0 + 1e-15);
                prop_assert!((here.re - a * (1.0 - (2.0 * t).cos())).abs() < 1e-12 * a);
            }
        }
    }

    #[test]
    fn schrodinger_limit_error_is_quadratic_in_argument() {
        // omega_minus - (r k^2/2 + v) ~ s^2 / 8 with s = r k^2 + 2 v.
        let mut prev = f64::INFINITY;
        for j in 0..6 {
            let s = 0.2 / 4f64.powi(j);
            let r = 1.0;
            let k = (s / r).sqrt();
            let d = dispersion_roots(&DispersionQuery {
                k_hat: k,
                params: EquationParameters::full(r, 0.0).unwrap(),
            })
            .unwrap();
            let dev = d.minus.re - s / 2.0;
            assert!(dev > 0.0);
            let ratio = dev / (s * s / 4.0);
            // leading coefficient of the expansion is 1/2 in these units
            assert!((ratio - 0.5).abs() < 0.2, "ratio {ratio}");
            assert!(dev < prev / 10.0);
            prev = dev;
        }
    }
}
