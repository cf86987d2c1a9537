//! Coherence norm, decoherence time and the power-law fit of t_d(gamma).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::OffDiagState;
use crate::error::{Error, Result};
use crate::params::Scenario;
use crate::quadrature::{integrate_gaussian_box, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaMethod {
    /// Gaussian integral in closed form.
    #[default]
    Analytic,
    /// Adaptive 2D quadrature of |W+-| over a +-10 sigma box.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DeltaOptions {
    pub method: DeltaMethod,
    /// Multiply by |a b*| (0.5 for the x-polarized beam). Off by default so
    /// that delta(0) = 1.
    pub include_spin_prefactor: bool,
}

/// Half-width of the quadrature box in whitened units.
pub const QUADRATURE_SIGMAS: f64 = 10.0;

fn checked_form(st: &OffDiagState) -> Result<([[f64; 2]; 2], f64)> {
    let a = st.quadratic_form();
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if !(det > 0.0 && a[0][0] > 0.0 && det.is_finite()) {
        return Err(Error::NotPositiveDefinite { det });
    }
    Ok((a, det))
}

/// ln of the integral of |W+-| over phase space.
pub fn log_delta(t: f64, scn: &Scenario, opts: DeltaOptions) -> Result<f64> {
    let st = OffDiagState::new(scn, t)?;
    let (a, det) = checked_form(&st)?;
    let base = match opts.method {
        // |W+-| = N exp(c0 - q^T A q / 2) has no linear term, so the
        // integral is N 2 pi / sqrt(det A) exp(c0).
        DeltaMethod::Analytic => {
            st.log_norm() + (2.0 * std::f64::consts::PI).ln() - 0.5 * det.ln() + st.c0()
        }
        DeltaMethod::Quadrature => {
            // Integrate the modulus with the constant factor pulled out so the
            // integrand is O(1) regardless of how small delta is.
            let shift = st.log_norm() + st.c0();
            let tol = Tolerance {
                rel: 1e-11,
                initial_panels: 8,
                ..Tolerance::default()
            };
            let r = integrate_gaussian_box(
                |z, p| (st.log_norm() + st.re_exponent(z, p) - shift).exp(),
                a,
                (0.0, 0.0),
                QUADRATURE_SIGMAS,
                tol,
            )
            .ok_or(Error::NotPositiveDefinite { det })?;
            r.value.ln() + shift
        }
    };
    let spin = if opts.include_spin_prefactor {
        scn.params().spin().coherence().norm().ln()
    } else {
        0.0
    };
    Ok(base + spin)
}

pub fn delta(t: f64, scn: &Scenario, opts: DeltaOptions) -> Result<f64> {
    Ok(log_delta(t, scn, opts)?.exp())
}

/// Relative width at which bisection stops.
pub const BISECTION_RTOL: f64 = 1e-12;

/// Finds t with ln g(t) = -1 by bisection on ln t, given
/// ln g(t_lo) > -1 > ln g(t_hi).
pub fn solve_decoherence_time(
    log_delta: impl Fn(f64) -> Result<f64>,
    (t_lo, t_hi): (f64, f64),
) -> Result<f64> {
    let invalid = |lo: f64, hi: f64| Error::BracketInvalid {
        t_lo,
        t_hi,
        delta_lo: lo.exp(),
        delta_hi: hi.exp(),
    };
    if !(t_lo > 0.0 && t_hi > t_lo) {
        return Err(Error::InvalidParams(format!(
            "bracket must satisfy 0 < t_lo < t_hi, got ({t_lo}, {t_hi})"
        )));
    }
    let f_lo = log_delta(t_lo)?;
    let f_hi = log_delta(t_hi)?;
    if !(f_lo > -1.0 && f_hi < -1.0) {
        return Err(invalid(f_lo, f_hi));
    }
    let (mut lo, mut hi) = (t_lo.ln(), t_hi.ln());
    for _ in 0..200 {
        if hi - lo < BISECTION_RTOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if log_delta(mid.exp())? > -1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Decoherence time inside an explicit bracket.
pub fn decoherence_time(scn: &Scenario, bracket: (f64, f64)) -> Result<f64> {
    solve_decoherence_time(|t| log_delta(t, scn, DeltaOptions::default()), bracket)
}

pub const SCAN_T_MIN: f64 = 1e-9;
pub const SCAN_T_MAX: f64 = 1.0;
pub const POINTS_PER_DECADE: usize = 64;

/// Log-spaced times over [SCAN_T_MIN, SCAN_T_MAX].
pub fn log_time_grid() -> impl Iterator<Item = f64> {
    let decades = (SCAN_T_MAX / SCAN_T_MIN).log10();
    let n = (decades * POINTS_PER_DECADE as f64).round() as usize;
    (0..=n).map(move |i| SCAN_T_MIN * 10f64.powf(i as f64 / POINTS_PER_DECADE as f64))
}

/// Brackets the 1/e crossing on the standard time grid.
pub fn find_bracket(scn: &Scenario) -> Result<(f64, f64)> {
    let mut prev: Option<(f64, f64)> = None;
    for t in log_time_grid() {
        let ld = log_delta(t, scn, DeltaOptions::default())?;
        if ld < -1.0 {
            return match prev {
                Some((tp, _)) => Ok((tp, t)),
                None => Err(Error::BracketInvalid {
                    t_lo: t,
                    t_hi: t,
                    delta_lo: ld.exp(),
                    delta_hi: ld.exp(),
                }),
            };
        }
        prev = Some((t, ld));
    }
    let (t, ld) = prev.expect("grid is not empty");
    Err(Error::BracketInvalid {
        t_lo: SCAN_T_MIN,
        t_hi: t,
        delta_lo: log_delta(SCAN_T_MIN, scn, DeltaOptions::default())?.exp(),
        delta_hi: ld.exp(),
    })
}

/// Bracket search followed by bisection.
pub fn decoherence_time_auto(scn: &Scenario) -> Result<f64> {
    decoherence_time(scn, find_bracket(scn)?)
}

/// (t, delta) samples for one damping rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceCurve {
    pub gamma: f64,
    pub samples: Vec<(f64, f64)>,
}

/// Curves stop once delta drops below this.
pub const CURVE_FLOOR: f64 = 1e-6;

/// Samples delta at t = 0 and on the standard log grid until it falls below
/// [`CURVE_FLOOR`] or t exceeds `t_max`.
pub fn coherence_curve(scn: &Scenario, t_max: f64, opts: DeltaOptions) -> Result<CoherenceCurve> {
    let mut samples = vec![(0.0, delta(0.0, scn, opts)?)];
    for t in log_time_grid().take_while(|&t| t <= t_max) {
        let d = delta(t, scn, opts)?;
        samples.push((t, d));
        if d < CURVE_FLOOR {
            break;
        }
    }
    Ok(CoherenceCurve {
        gamma: scn.gamma(),
        samples,
    })
}

/// Decoherence time t_d = a gamma^b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub a: f64,
    pub b: f64,
    pub stderr_a: f64,
    pub stderr_b: f64,
    /// rms residual of ln t_d
    pub residual: f64,
    pub n: usize,
}

/// Residual above which a fit is flagged as a poor power law.
pub const RESIDUAL_FLAG: f64 = 0.05;

impl PowerLawFit {
    pub fn flagged(&self) -> bool {
        !(self.residual < RESIDUAL_FLAG)
    }

    pub fn eval(&self, gamma: f64) -> f64 {
        self.a * gamma.powf(self.b)
    }
}

/// Ordinary least squares of ln y on ln x. Needs at least four points.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    let n = points.len();
    if n < 4 {
        return Err(Error::InsufficientData(format!("need >= 4 points for a fit, got {n}")));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::InvalidParams("power-law fit needs positive data".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let nf = n as f64;
    let xm = xs.iter().sum::<f64>() / nf;
    let ym = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InsufficientData("all abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let b = sxy / sxx;
    let c = ym - b * xm;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - c - b * x).powi(2)).sum();
    let s2 = ssr / (nf - 2.0);
    let se_b = (s2 / sxx).sqrt();
    let se_c = (s2 * (1.0 / nf + xm * xm / sxx)).sqrt();
    let a = c.exp();
    Ok(PowerLawFit {
        a,
        b,
        stderr_a: a * se_c,
        stderr_b: se_b,
        residual: (ssr / nf).sqrt(),
        n,
    })
}

/// Comparison time (3 hbar^2 m^2 gamma^2 / (4 D eta^2 lambda^2))^(1/3).
pub fn diffusion_estimate_time(scn: &Scenario) -> f64 {
    let m = scn.params().mass();
    let h = scn.hbar();
    let g = scn.gamma();
    let f = scn.force();
    (3.0 * h * h * m * m * g * g / (4.0 * scn.diffusion() * f * f)).cbrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherencePoint {
    pub gamma: f64,
    pub t_d: f64,
    pub t_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub points: Vec<DecoherencePoint>,
    pub fit: PowerLawFit,
}

/// Decoherence times for each gamma (evaluated concurrently) and their fit.
pub fn scan_and_fit(gammas: &[f64], scn: &Scenario) -> Result<ScanResult> {
    if gammas.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "need >= 4 damping rates, got {}",
            gammas.len()
        )));
    }
    let (lo, hi) = gammas
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &g| (lo.min(g), hi.max(g)));
    if !(lo > 0.0) || (hi / lo).log10() < 4.0 - 1e-9 {
        return Err(Error::InsufficientData(
            "damping rates must be positive and span at least four decades".into(),
        ));
    }
    let points = gammas
        .par_iter()
        .map(|&g| {
            let s = scn.with_gamma(g)?;
            Ok(DecoherencePoint {
                gamma: g,
                t_d: decoherence_time_auto(&s)?,
                t_estimate: diffusion_estimate_time(&s),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let data: Vec<(f64, f64)> = points.iter().map(|p| (p.gamma, p.t_d)).collect();
    Ok(ScanResult {
        fit: fit_power_law(&data)?,
        points,
    })
}
