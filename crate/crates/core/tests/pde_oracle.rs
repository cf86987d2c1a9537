//! Finite-difference solver against the closed forms.

mod common;

use num_complex::Complex64;
use sgwigner::closedform::initial_wigner;
use sgwigner::pde::*;
use sgwigner::{Branch, Error, PhaseSpaceGrid};

fn gaussian(grid: PhaseSpaceGrid) -> RealField {
    RealField::from_fn(grid, |z, p| initial_wigner(z, p, 1.0, 1.0))
}

fn gaussian_c(grid: PhaseSpaceGrid) -> ComplexField {
    ComplexField::from_fn(grid, |z, p| Complex64::new(initial_wigner(z, p, 1.0, 1.0), 0.0))
}

fn diag_config(n: usize) -> PdeConfig {
    let scn = diag_validation_scenario();
    let grid = validation_grid(&scn, 1.0, n, VALIDATION_PADDING).unwrap();
    let dt = PdeConfig::max_stable_dt(&grid, &scn, true, false) * 0.5;
    PdeConfig::new(grid, dt)
}

#[test]
fn diag_matches_closed_form_and_converges() {
    let scn = diag_validation_scenario();
    let (coarse, _) = validate_diag(&scn, 1.0, 128, Limiter::MonotonizedCentral).unwrap();
    let (fine, _) = validate_diag(&scn, 1.0, 256, Limiter::MonotonizedCentral).unwrap();
    assert!(fine.l2_error < 1e-2, "L2 {}", fine.l2_error);
    assert!(coarse.l2_error / fine.l2_error >= 2.0, "{} -> {}", coarse.l2_error, fine.l2_error);
}

#[test]
fn offdiag_modulus_matches_closed_form_and_converges() {
    let scn = offdiag_validation_scenario();
    let (coarse, _) = validate_offdiag(&scn, 1.0, 128, Limiter::MonotonizedCentral).unwrap();
    let (fine, _) = validate_offdiag(&scn, 1.0, 256, Limiter::MonotonizedCentral).unwrap();
    assert!(fine.l2_error < 2e-2, "L2 {}", fine.l2_error);
    assert!(coarse.l2_error / fine.l2_error >= 2.0, "{} -> {}", coarse.l2_error, fine.l2_error);
}

#[test]
fn upwind_is_first_order_and_too_coarse() {
    // Kept selectable for comparison; the error only halves per doubling.
    let scn = diag_validation_scenario();
    let (c, _) = validate_diag(&scn, 1.0, 64, Limiter::Upwind).unwrap();
    let (f, _) = validate_diag(&scn, 1.0, 128, Limiter::Upwind).unwrap();
    let ratio = c.l2_error / f.l2_error;
    assert!(ratio > 1.5 && ratio < 3.0, "ratio {ratio}");
    assert!(f.l2_error > 1e-2);
}

#[test]
fn mass_drift_over_a_thousand_steps() {
    let scn = diag_validation_scenario();
    let dt = diag_config(128).dt;
    let t_end = dt * 1000.0;
    let grid = validation_grid(&scn, t_end, 128, VALIDATION_PADDING).unwrap();
    let mut cfg = PdeConfig::new(grid, dt.min(PdeConfig::max_stable_dt(&grid, &scn, true, false)));
    cfg.audit_every = 100;
    let init = gaussian(grid);
    let (_, rep) = evolve_diag(&init, Branch::Plus, &scn, &cfg, t_end).unwrap();
    assert!(rep.steps >= 1000);
    assert!(rep.mass_drift() < 1e-6, "drift {}", rep.mass_drift());
}

#[test]
fn diagonal_stays_nonnegative() {
    let scn = diag_validation_scenario();
    let cfg = diag_config(128);
    let init = gaussian(cfg.grid);
    let peak = init.values.iter().cloned().fold(0.0, f64::max);
    let (_, rep) = evolve_diag(&init, Branch::Minus, &scn, &cfg, 1.0).unwrap();
    for a in &rep.audits {
        assert!(a.min >= -1e-12 * peak, "step {} min {}", a.step, a.min);
    }
}

#[test]
fn coherence_norm_decreases() {
    let scn = offdiag_validation_scenario();
    let grid = validation_grid(&scn, 1.0, 96, VALIDATION_PADDING).unwrap();
    let dt = PdeConfig::max_stable_dt(&grid, &scn, false, true) * 0.5;
    let mut cfg = PdeConfig::new(grid, dt);
    cfg.audit_every = 20;
    let (_, rep) = evolve_offdiag(&gaussian_c(grid), Branch::Plus, &scn, &cfg, 1.0).unwrap();
    assert!(rep.audits.len() > 10);
    for w in rep.audits.windows(2) {
        assert!(w[1].mass < w[0].mass, "{:?} -> {:?}", w[0], w[1]);
    }
}

#[test]
fn conjugate_evolves_with_opposite_phase() {
    let scn = nondim_scenario(0.1, 0.25, 1.5, 0.3).unwrap();
    let grid = PhaseSpaceGrid::symmetric(7.0, 7.0, 40, 40).unwrap();
    let cfg = PdeConfig::new(grid, PdeConfig::max_stable_dt(&grid, &scn, false, true));
    let w0 = ComplexField::from_fn(grid, |z, p| {
        Complex64::from_polar(initial_wigner(z, p, 1.0, 1.0), 0.3 * z - 0.2 * p)
    });
    let (a, _) = evolve_offdiag(&w0, Branch::Plus, &scn, &cfg, 0.5).unwrap();
    let (b, _) = evolve_offdiag(&w0.conj(), Branch::Minus, &scn, &cfg, 0.5).unwrap();
    assert_eq!(a.conj(), b);
}

#[test]
fn halving_dt_changes_less_than_spatial_error() {
    let scn = diag_validation_scenario();
    let cfg = diag_config(128);
    let init = gaussian(cfg.grid);
    let (u1, _) = evolve_diag(&init, Branch::Plus, &scn, &cfg, 1.0).unwrap();
    let half = PdeConfig { dt: cfg.dt / 2.0, ..cfg };
    let (u2, _) = evolve_diag(&init, Branch::Plus, &scn, &half, 1.0).unwrap();
    let (run, _) = validate_diag(&scn, 1.0, 128, Limiter::MonotonizedCentral).unwrap();
    let change = relative_l2(&u1.values, &u2.values);
    assert!(change < run.l2_error, "dt change {change} vs error {}", run.l2_error);
}

#[test]
fn tight_box_reports_leak() {
    let scn = diag_validation_scenario();
    let grid = PhaseSpaceGrid::symmetric(3.0, 3.0, 48, 48).unwrap();
    let cfg = PdeConfig::new(grid, PdeConfig::max_stable_dt(&grid, &scn, true, false));
    let err = evolve_diag(&gaussian(grid), Branch::Plus, &scn, &cfg, 1.0).unwrap_err();
    assert!(matches!(err, Error::BoundaryLeak { .. }), "{err}");
}

#[test]
fn mismatched_grid_rejected() {
    let scn = diag_validation_scenario();
    let cfg = diag_config(64);
    let other = PhaseSpaceGrid::symmetric(5.0, 5.0, 64, 64).unwrap();
    assert!(matches!(
        evolve_diag(&gaussian(other), Branch::Plus, &scn, &cfg, 1.0),
        Err(Error::InvalidParams(_))
    ));
}
