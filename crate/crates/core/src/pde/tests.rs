use super::*;
use crate::analytic::free_solution;
use crate::integrator::{rhs_uniform, TemporalState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

type C = Complex<f64>;

fn noise(grid: Grid<f64>, seed: u64) -> ComplexField<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.n())
        .map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexField::new(grid, values).unwrap()
}

#[test]
fn grid_validation() {
    assert!(Grid::new(4, 1.0).is_err());
    assert!(Grid::new(12, 1.0).is_err());
    assert!(Grid::new(16, 0.0).is_err());
    let g = Grid::new(16, 8.0f64).unwrap();
    assert_eq!(g.dx(), 0.5);
    assert_eq!(g.mode_number(8), 8);
    assert_eq!(g.mode_number(9), -7);
    assert_eq!(g.bin(-1), 15);
    assert!((g.wavenumber(1) - TAU / 8.0).abs() < 1e-15);
    assert!(ComplexField::new(g, vec![C::new(0.0, 0.0); 3]).is_err());
    assert!(ComplexField::new(g, vec![C::new(f64::NAN, 0.0); 16]).is_err());
    let other = Grid::new(32, 8.0).unwrap();
    assert!(FieldState::new(ComplexField::zeros(g), ComplexField::zeros(other)).is_err());
}

#[test]
fn laplacian_of_constant_is_zero() {
    let g = Grid::new(64, 10.0).unwrap();
    let f = ComplexField::constant(g, C::new(0.3, -1.7));
    assert!(laplacian(&f).values().iter().all(|z| *z == C::new(0.0, 0.0)));
    assert!(spectral_laplacian(&f).max_abs() < 1e-13);
}

#[test]
fn stencil_on_sine_is_second_order_accurate() {
    let length = 10.0;
    let g = Grid::new(256, length).unwrap();
    let k = TAU / length;
    let f = ComplexField::from_fn(g, |x| C::new((k * x).sin(), 0.0));
    let lf = laplacian(&f);
    let exact = f.scale(C::new(-k * k, 0.0));
    let rel = lf.sup_distance(&exact) / exact.max_abs();
    assert!(rel < 1e-3, "relative error {rel}");
    // and the leading error term is (k dx)^2 / 12
    let predicted = (k * g.dx()).powi(2) / 12.0;
    assert!((rel / predicted - 1.0).abs() < 0.01);
}

#[test]
fn fourier_modes_are_eigenvectors() {
    let g = Grid::new(32, 7.0).unwrap();
    for m in [-16i64, -5, 0, 1, 3, 16] {
        let j = g.bin(m);
        let mode = ComplexField::plane_wave(g, m);
        for kind in [LaplacianKind::Stencil, LaplacianKind::Spectral] {
            let lap = Laplacian::new(g, kind);
            let lambda = lap.eigenvalue(j);
            let out = lap.apply_field(&mode);
            let expected = mode.scale(C::new(lambda, 0.0));
            assert!(out.sup_distance(&expected) <= 1e-12 * lambda.abs().max(1.0), "{kind:?} m={m}");
        }
        let k = g.wavenumber(j);
        let stencil = -(2.0 / g.dx().powi(2)) * (1.0 - (k * g.dx()).cos());
        assert_eq!(eigenvalue(&g, LaplacianKind::Stencil, j), stencil);
        assert_eq!(eigenvalue(&g, LaplacianKind::Spectral, j), -k * k);
    }
}

#[test]
fn uniform_rhs_reduces_to_ode_rhs() {
    let g = Grid::new(16, 4.0).unwrap();
    let psi = C::new(0.4, -0.2);
    let phi = C::new(-1.1, 0.7);
    let state = FieldState::uniform(g, psi, phi);
    for v in [0.0, 0.3, -0.8] {
        let coeffs = CanonicalCoefficients::new(1.0, 1.0, v).unwrap();
        let ode = rhs_uniform(&TemporalState::new(psi, phi), v);
        let d = rhs_field(&state, &coeffs, &Laplacian::new(g, LaplacianKind::Stencil));
        assert!(d.psi.values().iter().all(|&z| z == ode.psi));
        assert!(d.dpsi_dt.values().iter().all(|&z| z == ode.dpsi_dt));
    }
}

#[test]
fn macroscopic_rhs_has_no_spatial_coupling() {
    let g = Grid::new(16, 4.0).unwrap();
    let lap = Laplacian::new(g, LaplacianKind::Stencil);
    let coeffs = CanonicalCoefficients::new(0.0, 1.0, 0.2).unwrap();
    let mut values = vec![C::new(1.0, 0.0); 16];
    values[5] = C::new(3.0, 2.0);
    let state = FieldState::new(ComplexField::new(g, values).unwrap(), ComplexField::zeros(g)).unwrap();
    let d = rhs_field(&state, &coeffs, &lap);
    let baseline = rhs_uniform(&TemporalState::new(C::new(1.0, 0.0), C::new(0.0, 0.0)), 0.2);
    for (j, z) in d.dpsi_dt.values().iter().enumerate() {
        if j != 5 {
            assert_eq!(*z, baseline.dpsi_dt);
        }
    }
}

#[test]
fn literal_and_reduced_rhs_agree_on_noise() {
    let g = Grid::new(64, 12.0).unwrap();
    for (seed, r, v, form) in [
        (1, 1.0, 0.0, EquationForm::Full),
        (2, 0.01, 0.3, EquationForm::Full),
        (3, 7.5, -0.4, EquationForm::Microscopic),
        (4, 1e-3, 0.1, EquationForm::Macroscopic),
    ] {
        let state = FieldState::new(noise(g, seed), noise(g, seed + 100)).unwrap();
        for kind in [LaplacianKind::Stencil, LaplacianKind::Spectral] {
            let lap = Laplacian::new(g, kind);
            let coeffs = crate::analytic::reduce_equation(
                &crate::analytic::EquationParameters::new(r, v, form).unwrap(),
            )
            .unwrap();
            let reduced = rhs_field(&state, &coeffs, &lap);
            let literal = rhs_field_literal(&state, form, r, v, &lap);
            let scale = reduced.dpsi_dt.max_abs().max(1.0);
            assert!(
                literal.dpsi_dt.sup_distance(&reduced.dpsi_dt) < 1e-13 * scale,
                "{form:?} r={r} {kind:?}"
            );
            assert_eq!(literal.psi, reduced.psi);
        }
    }
}

#[test]
fn stability_dt_examples() {
    let g = Grid::new(64, 16.0).unwrap();
    let macro_ = CanonicalCoefficients::new(0.0f64, 1.0, 0.0).unwrap();
    for safety in [1.0, 0.5] {
        let b = stability_dt(&macro_, &g, LaplacianKind::Stencil, safety).unwrap();
        assert!((b.dt - 1.4 * safety).abs() < 1e-15);
        assert_eq!(b.unstable_modes, 0);
    }

    let full = CanonicalCoefficients::new(0.5, 1.0, 0.0).unwrap();
    let coarse = stability_dt(&full, &g, LaplacianKind::Stencil, 0.9).unwrap();
    let fine = stability_dt(&full, &Grid::new(128, 16.0).unwrap(), LaplacianKind::Stencil, 0.9).unwrap();
    assert!(fine.dt < coarse.dt);

    let zero_r = CanonicalCoefficients::new(0.0, 1.0, 0.0).unwrap();
    let b = stability_dt(&zero_r, &Grid::new(256, 3.0).unwrap(), LaplacianKind::Spectral, 1.0).unwrap();
    assert_eq!(b.dt, 1.4);

    let hot = CanonicalCoefficients::new(1.0f64, 1.0, 0.75).unwrap();
    let b = stability_dt(&hot, &g, LaplacianKind::Stencil, 1.0).unwrap();
    assert!(b.all_unstable(g.n()));
    assert!(b.dt.is_finite() && b.dt > 0.0);

    assert!(stability_dt(&full, &g, LaplacianKind::Stencil, 0.0).is_err());
    assert!(stability_dt(&full, &g, LaplacianKind::Stencil, 1.5).is_err());
}

#[test]
fn filter_leaves_band_limited_state_alone() {
    let g = Grid::new(64, 32.0).unwrap();
    let psi = ComplexField::from_fn(g, |x| {
        C::new((TAU * 2.0 * x / 32.0).cos(), 0.5 * (TAU * 3.0 * x / 32.0).sin())
    });
    let state = FieldState::new(psi.clone(), psi.scale(C::new(0.0, -1.0))).unwrap();
    let k_cut = TAU * 3.5 / 32.0;
    let out = spectral_filter(&state, k_cut).unwrap();
    assert!(out.psi.sup_distance(&state.psi) < 1e-12);
    assert!(out.dpsi_dt.sup_distance(&state.dpsi_dt) < 1e-12);
}

#[test]
fn zero_cutoff_keeps_only_the_mean() {
    let g = Grid::new(128, 10.0).unwrap();
    let psi = noise(g, 9);
    let mean = psi.values().iter().sum::<C>() / 128.0;
    let state = FieldState::new(psi, noise(g, 10)).unwrap();
    let out = spectral_filter(&state, 0.0).unwrap();
    assert!(out.psi.values().iter().all(|z| (z - mean).norm() < 1e-14));
    assert!(spectral_filter(&state, -1.0).is_err());
}

#[test]
fn uniform_macroscopic_run_reproduces_free_solution() {
    let g = Grid::new(8, 4.0).unwrap();
    let one = C::new(1.0, 0.0);
    let start = TemporalState::from_amplitude(one);
    let mut problem = PdeProblem::new(
        CanonicalCoefficients::new(0.0, 1.0, 0.0).unwrap(),
        FieldState::uniform(g, start.psi, start.dpsi_dt),
        100.0,
        LaplacianKind::Stencil,
        1.0,
    )
    .unwrap();
    problem.dt = 1e-3;
    problem.snapshot_stride = 10_000;
    let snaps = evolve(&problem).unwrap();
    let last = snaps.last().unwrap();
    assert_eq!(last.time, 100.0);
    let exact = free_solution(one, 100.0);
    assert!(last.state.psi.values().iter().all(|z| (z - exact).norm() < 1e-8));
    assert_eq!(snaps.len(), 11);
    assert!((last.max_abs - exact.norm()).abs() < 1e-8);
}

#[test]
fn unstable_initial_data_rejected_unless_allowed() {
    let g = Grid::new(64, 20.0).unwrap();
    let coeffs = CanonicalCoefficients::new(1.0, 1.0, 0.0).unwrap();
    // mode 8 has k = 2.5 > k_crit = 1
    let psi = ComplexField::plane_wave(g, 8);
    let state = FieldState::new(psi.clone(), psi).unwrap();
    let mut problem = PdeProblem::new(coeffs, state, 1.0, LaplacianKind::Spectral, 0.5).unwrap();
    assert!(matches!(evolve(&problem), Err(Error::InvalidInput { .. })));
    problem.allow_unstable = true;
    assert!(evolve(&problem).is_ok());
    // filtering the data below k_crit makes it admissible
    problem.allow_unstable = false;
    problem.band_limit = BandLimit::Initial(0.5);
    assert!(evolve(&problem).is_ok());
}

#[test]
fn oversized_step_rejected() {
    let g = Grid::new(16, 20.0).unwrap();
    let coeffs = CanonicalCoefficients::new(0.0, 1.0, 0.0).unwrap();
    let mut problem = PdeProblem::new(coeffs, FieldState::uniform(g, C::new(1.0, 0.0), C::new(0.0, 0.0)), 1.0, LaplacianKind::Stencil, 1.0).unwrap();
    problem.dt = 2.0;
    assert!(evolve(&problem).is_err());
}

#[test]
fn growth_is_reported_with_dominant_mode() {
    let g = Grid::new(32, 2.0 * PI * 4.0).unwrap();
    let coeffs = CanonicalCoefficients::new(1.0, 1.0, 0.0).unwrap();
    // Nyquist mode 16: k = 4, growth rate sqrt(15), the fastest on this grid
    let psi = ComplexField::plane_wave(g, 16);
    let mut problem = PdeProblem::new(coeffs, FieldState::new(psi.clone(), ComplexField::zeros(g)).unwrap(), 200.0, LaplacianKind::Spectral, 0.5).unwrap();
    problem.allow_unstable = true;
    match evolve(&problem) {
        Err(Error::BlowUp { time, mode }) => {
            assert!(time > 40.0 && time < 80.0, "time {time}");
            assert_eq!(mode, Some(16));
        }
        other => panic!("expected blow-up, got {other:?}"),
    }
}

#[test]
fn packet_helpers() {
    let g = Grid::new(256, 64.0f64).unwrap();
    let p = gaussian_packet(g, 32.0, 2.0, 0.0).unwrap();
    assert!((p.rms_width() - 2.0).abs() < 1e-10);
    assert!((p.mean_position() - 32.0).abs() < 1e-10);
    assert!(gaussian_packet(g, 32.0, 0.0, 0.0).is_err());
    assert_eq!(free_packet_width(2.0f64, 1.0, 0.0), 2.0);
    assert!((free_packet_width(2.0f64, 1.0, 8.0 * 3f64.sqrt()) - 4.0).abs() < 1e-12);
}

#[test]
fn single_precision_rhs() {
    let g = Grid::<f32>::new(16, 4.0).unwrap();
    let coeffs = CanonicalCoefficients::new(1.0f32, 1.0, 0.0).unwrap();
    let state = FieldState::uniform(g, Complex::new(0.0f32, 0.0), Complex::new(0.0, 2.0));
    let d = rhs_field(&state, &coeffs, &Laplacian::new(g, LaplacianKind::Spectral));
    assert!(d.dpsi_dt.values().iter().all(|z| (z - Complex::new(4.0f32, 0.0)).norm() < 1e-5));
}
