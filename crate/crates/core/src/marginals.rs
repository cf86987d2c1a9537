//! Position and momentum marginals of the diagonal blocks, their moments,
//! the classical equations for the centers, and the asymptotic regimes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Scenario;
use crate::series::TauFunctions;

/// Selects W++ (`Plus`, drift +eta lambda) or W-- (`Minus`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Centers and widths of the diagonal Gaussians at one time.
///
/// `z_c` and `p_c` are the magnitudes of the centers; the W-- block sits at
/// `(-z_c, -p_c)`. Widths follow the `exp(-x^2/w^2)` convention, so
/// `sigma_z` equals the initial `sigma` at t = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianMoments {
    pub t: f64,
    pub z_c: f64,
    pub p_c: f64,
    pub sigma_z: f64,
    pub sigma_p: f64,
}

impl GaussianMoments {
    pub fn z_center(&self, branch: Branch) -> f64 {
        branch.sign() * self.z_c
    }

    pub fn p_center(&self, branch: Branch) -> f64 {
        branch.sign() * self.p_c
    }
}

/// Moments at time `t`. Valid for any gamma >= 0, including gamma = 0.
pub fn moments(t: f64, scn: &Scenario) -> GaussianMoments {
    let f = TauFunctions::new(scn.tau(t));
    moments_with(t, &f, scn)
}

pub(crate) fn moments_with(t: f64, f: &TauFunctions, scn: &Scenario) -> GaussianMoments {
    let p = scn.params();
    let (m, s, h, d) = (p.mass(), p.sigma(), scn.hbar(), scn.diffusion());
    let force = scn.force();
    let sz2 = 2.0 * d * t.powi(3) * f.phi_sz / (m * m)
        + (h * t * f.phi_a / (m * s)).powi(2)
        + s * s;
    let sp2 = 4.0 * d * t * f.phi_b + (h / s).powi(2) * f.e2;
    GaussianMoments {
        t,
        z_c: force * t * t * f.phi_zc / m,
        p_c: force * t * f.phi_a,
        sigma_z: sz2.sqrt(),
        sigma_p: sp2.sqrt(),
    }
}

fn gaussian(x: f64, center: f64, width: f64) -> f64 {
    let u = (x - center) / width;
    (-u * u).exp() / (std::f64::consts::PI.sqrt() * width)
}

/// Position density of the `branch` block.
pub fn position_pdf(z: f64, t: f64, branch: Branch, scn: &Scenario) -> f64 {
    let mo = moments(t, scn);
    gaussian(z, mo.z_center(branch), mo.sigma_z)
}

/// Momentum density of the `branch` block.
pub fn momentum_pdf(p: f64, t: f64, branch: Branch, scn: &Scenario) -> f64 {
    let mo = moments(t, scn);
    gaussian(p, mo.p_center(branch), mo.sigma_p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CenterPoint {
    pub t: f64,
    pub z_c: f64,
    pub p_c: f64,
}

/// Integrates dz/dt = p/m, dp/dt = eta lambda - gamma p from rest with RK4.
///
/// The last step is shortened so the trajectory ends exactly at `t_end`.
pub fn classical_centers_ode(t_end: f64, scn: &Scenario, dt: f64) -> Result<Vec<CenterPoint>> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "need dt > 0 and t_end >= 0, got dt = {dt}, t_end = {t_end}"
        )));
    }
    let gamma = scn.gamma();
    if gamma * dt > 0.1 {
        return Err(Error::StepTooLarge { gamma_dt: gamma * dt });
    }
    let m = scn.params().mass();
    let force = scn.force();
    let rhs = |_z: f64, p: f64| (p / m, force - gamma * p);

    let n = (t_end / dt).ceil() as usize;
    let mut out = Vec::with_capacity(n + 1);
    let (mut z, mut p) = (0.0f64, 0.0f64);
    out.push(CenterPoint { t: 0.0, z_c: z, p_c: p });
    for i in 0..n {
        let t0 = i as f64 * dt;
        let h = dt.min(t_end - t0);
        let (k1z, k1p) = rhs(z, p);
        let (k2z, k2p) = rhs(z + 0.5 * h * k1z, p + 0.5 * h * k1p);
        let (k3z, k3p) = rhs(z + 0.5 * h * k2z, p + 0.5 * h * k2p);
        let (k4z, k4p) = rhs(z + h * k3z, p + h * k3p);
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        let t = if i + 1 == n { t_end } else { t0 + h };
        out.push(CenterPoint { t, z_c: z, p_c: p });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    SmallTau,
    Crossover,
    LargeTau,
}

/// Asymptotic estimates of the four moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxMoments {
    pub z_c: f64,
    pub sigma_z: f64,
    pub p_c: f64,
    pub sigma_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    pub tau: f64,
    pub regime: Regime,
    /// gamma t << 1 expansions.
    pub small_tau: ApproxMoments,
    /// gamma t >> 1 limits; `None` when gamma = 0.
    pub large_tau: Option<ApproxMoments>,
    /// 2 D sigma^2 / (gamma hbar^2); decides whether the small-tau width
    /// expansion of sigma_p is usable (it needs ratio * tau << 1).
    pub width_ratio: f64,
}

impl RegimeReport {
    /// Estimates for the classified regime (small-tau set in the crossover).
    pub fn approximations(&self) -> ApproxMoments {
        match (self.regime, self.large_tau) {
            (Regime::LargeTau, Some(l)) => l,
            _ => self.small_tau,
        }
    }
}

pub const SMALL_TAU: f64 = 0.01;
pub const LARGE_TAU: f64 = 100.0;

pub fn regime(t: f64, scn: &Scenario) -> RegimeReport {
    let p = scn.params();
    let (m, s, h, g) = (p.mass(), p.sigma(), scn.hbar(), scn.gamma());
    let kt = scn.consts().k_b * p.temperature();
    let force = scn.force();
    let tau = scn.tau(t);
    let ratio = scn.width_ratio();
    let small_tau = ApproxMoments {
        z_c: force * t * t / (2.0 * m),
        sigma_z: s + h * h * t * t / (2.0 * m * m * s.powi(3)),
        p_c: force * t,
        sigma_p: h / s + h / s * (ratio - 1.0) * tau,
    };
    let large_tau = (g > 0.0).then(|| ApproxMoments {
        z_c: force * t / (g * m),
        sigma_z: (8.0 * kt * t / (g * m)).sqrt(),
        p_c: force / g,
        sigma_p: (4.0 * m * kt).sqrt(),
    });
    let regime = if tau < SMALL_TAU {
        Regime::SmallTau
    } else if tau > LARGE_TAU {
        Regime::LargeTau
    } else {
        Regime::Crossover
    };
    RegimeReport {
        tau,
        regime,
        small_tau,
        large_tau,
        width_ratio: ratio,
    }
}
