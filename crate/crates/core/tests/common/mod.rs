#![allow(dead_code)]

use std::path::PathBuf;

use sgwigner::{ExperimentParams, PhysicalConstants, Scenario, SpinState};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// Rows of a numeric CSV fixture with a header line.
pub fn read_table(name: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(data_path(name)).expect("fixture present");
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|c| c.trim().parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

pub fn silver(gamma: f64) -> Scenario {
    Scenario::silver_sg().with_gamma(gamma).unwrap()
}

/// hbar = m = sigma = k_B = mu_B = 1, g_s = 2, so lambda = 1.
pub fn nondim(gamma: f64, temperature: f64, eta: f64) -> Scenario {
    let p = ExperimentParams::new(1.0, 2.0, 0.0, eta, 1.0, temperature, gamma, SpinState::x_up())
        .unwrap();
    Scenario::new(p, PhysicalConstants::NONDIMENSIONAL)
}

use sgwigner::marginals::{momentum_pdf, position_pdf};
use sgwigner::quadrature::{integrate, integrate_gaussian_box, Tolerance};
use sgwigner::{Branch, DiagState};

/// Sum over both diagonal blocks of the spin-weighted phase-space integral.
pub fn trace_norm(scn: &Scenario, t: f64) -> f64 {
    let spin = scn.params().spin();
    [Branch::Plus, Branch::Minus]
        .iter()
        .map(|&b| {
            let st = DiagState::new(scn, t, b).unwrap();
            let w = if b == Branch::Plus { spin.weight_up() } else { spin.weight_down() };
            let r = integrate_gaussian_box(|z, p| st.eval(z, p), st.quadratic_form(), st.center(), 10.0, Tolerance::default())
                .unwrap();
            w * r.value
        })
        .sum()
}

/// Largest deviation of the quadrature marginals of W++ from the closed-form
/// densities, relative to each density's peak. Returns (position, momentum).
pub fn marginal_errors(scn: &Scenario, t: f64, branch: Branch) -> (f64, f64) {
    let st = DiagState::new(scn, t, branch).unwrap();
    let mo = *st.moments();
    let (zc, pc) = st.center();
    let tol = Tolerance { rel: 1e-12, ..Tolerance::default() };
    let peak_z = position_pdf(zc, t, branch, scn);
    let peak_p = momentum_pdf(pc, t, branch, scn);
    let mut ez = 0.0f64;
    let mut ep = 0.0f64;
    for k in -10..=10 {
        let u = k as f64 * 0.4;
        let z = zc + u * mo.sigma_z;
        let q = integrate(|p| st.eval(z, p), pc - 12.0 * mo.sigma_p, pc + 12.0 * mo.sigma_p, tol).value;
        ez = ez.max((q - position_pdf(z, t, branch, scn)).abs() / peak_z);
        let p = pc + u * mo.sigma_p;
        let q = integrate(|z| st.eval(z, p), zc - 12.0 * mo.sigma_z, zc + 12.0 * mo.sigma_z, tol).value;
        ep = ep.max((q - momentum_pdf(p, t, branch, scn)).abs() / peak_p);
    }
    (ez, ep)
}
