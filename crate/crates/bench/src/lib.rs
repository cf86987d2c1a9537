//! Shared fixtures for the benchmarks.

use sgwigner::pde::{diag_validation_scenario, validation_grid, PdeConfig, RealField, VALIDATION_PADDING};
use sgwigner::{initial_wigner, Scenario};

/// The built-in silver configuration at the given damping rate.
pub fn silver(gamma: f64) -> Scenario {
    Scenario::silver_sg()
        .with_gamma(gamma)
        .expect("positive gamma")
}

/// Diagonal validation case on an `n x n` grid at Courant number 0.5, with
/// its initial field.
pub fn pde_case(n: usize) -> (Scenario, PdeConfig, RealField) {
    let scn = diag_validation_scenario();
    let grid = validation_grid(&scn, 1.0, n, VALIDATION_PADDING).expect("valid grid");
    let dt = 0.5 * PdeConfig::max_stable_dt(&grid, &scn, true, false);
    let field = RealField::from_fn(grid, |z, p| initial_wigner(z, p, 1.0, 1.0));
    (scn, PdeConfig::new(grid, dt), field)
}
