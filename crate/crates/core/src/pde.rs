//! Finite-difference reference solver for the Wigner evolution equations.
//!
//! Diagonal blocks obey
//!
//! ```text
//! dW/dt = -(p/m) dW/dz - d/dp[(s eta lambda - gamma p) W] + D d2W/dp2
//! ```
//!
//! and the coherence block the same transport without the force plus a
//! pointwise rotation `exp(+-i (2 lambda B0 + 2 lambda eta z) t / hbar)`.
//! One step is a Strang splitting: half a step of z-transport, half of
//! p-transport, a Crank-Nicolson diffusion step and the exact rotation, then
//! the two half steps in reverse. Transport uses a flux-limited finite-volume
//! update with zero inflow at the box edges.
//!
//! The solver is meant for nondimensional parameter sets; the silver
//! configuration has a phase frequency of ~1e12 rad/s that no grid resolves.

use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::closedform::{DiagState, OffDiagState};
use crate::error::{Error, Result};
use crate::grid::PhaseSpaceGrid;
use crate::marginals::{moments, Branch};
use crate::params::{ExperimentParams, PhysicalConstants, Scenario, SpinState};

/// Slope limiter of the transport step. `Upwind` is the plain first-order
/// donor-cell scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Limiter {
    Upwind,
    VanLeer,
    MonotonizedCentral,
    LaxWendroff,
}

impl Limiter {
    fn phi(self, theta: f64) -> f64 {
        match self {
            Limiter::Upwind => 0.0,
            Limiter::LaxWendroff => 1.0,
            Limiter::VanLeer => (theta + theta.abs()) / (1.0 + theta.abs()),
            Limiter::MonotonizedCentral => (0.5 * (1.0 + theta)).min(2.0).min(2.0 * theta).max(0.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Limiter::Upwind => "upwind",
            Limiter::VanLeer => "van-leer",
            Limiter::MonotonizedCentral => "mc",
            Limiter::LaxWendroff => "lax-wendroff",
        }
    }
}

impl FromStr for Limiter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upwind" => Ok(Limiter::Upwind),
            "van-leer" => Ok(Limiter::VanLeer),
            "mc" => Ok(Limiter::MonotonizedCentral),
            "lax-wendroff" => Ok(Limiter::LaxWendroff),
            _ => Err(Error::Parse(format!(
                "unknown limiter '{s}' (upwind | van-leer | mc | lax-wendroff)"
            ))),
        }
    }
}

/// Courant limit for both transport directions.
pub const CFL_LIMIT: f64 = 0.9;
/// Largest phase rotation per step, rad.
pub const PHASE_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeConfig {
    pub grid: PhaseSpaceGrid,
    /// Largest allowed step; `evolve` shortens it to land on `t_end`.
    pub dt: f64,
    pub limiter: Limiter,
    /// Width in cells of the edge band watched for leaking mass.
    pub boundary_band: usize,
    /// Largest tolerated fraction of |W| inside the edge band.
    pub leak_tolerance: f64,
    /// Steps between audit records.
    pub audit_every: usize,
}

impl PdeConfig {
    pub fn new(grid: PhaseSpaceGrid, dt: f64) -> Self {
        PdeConfig {
            grid,
            dt,
            limiter: Limiter::MonotonizedCentral,
            boundary_band: 4,
            leak_tolerance: 1e-6,
            audit_every: 50,
        }
    }

    pub fn with_limiter(mut self, limiter: Limiter) -> Self {
        self.limiter = limiter;
        self
    }

    /// Largest dt meeting the transport Courant limit (and the phase limit
    /// when `phase_rate` is given).
    pub fn max_stable_dt(grid: &PhaseSpaceGrid, scn: &Scenario, with_force: bool, phase: bool) -> f64 {
        let m = scn.params().mass();
        let pmax = grid.p_min().abs().max(grid.p_max().abs());
        let mut dt = CFL_LIMIT * grid.dz() / (pmax / m);
        let vp = face_velocities(grid, scn, if with_force { 1.0 } else { 0.0 });
        let vmax = vp.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if vmax > 0.0 {
            dt = dt.min(CFL_LIMIT * grid.dp() / vmax);
        }
        if phase {
            let rate = max_phase_rate(grid, scn);
            if rate > 0.0 {
                dt = dt.min(PHASE_LIMIT / rate);
            }
        }
        dt
    }
}

/// Real field on a grid, z-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    pub grid: PhaseSpaceGrid,
    pub values: Vec<f64>,
}

impl RealField {
    pub fn from_fn(grid: PhaseSpaceGrid, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let mut values = vec![0.0; grid.len()];
        values.par_chunks_mut(grid.n_p()).enumerate().for_each(|(i, row)| {
            let z = grid.z(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(z, grid.p(j));
            }
        });
        RealField { grid, values }
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }
}

/// Complex field stored as separate real and imaginary lattices.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: PhaseSpaceGrid,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ComplexField {
    pub fn from_fn(grid: PhaseSpaceGrid, f: impl Fn(f64, f64) -> Complex64 + Sync) -> Self {
        let n = grid.len();
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        re.par_chunks_mut(grid.n_p())
            .zip(im.par_chunks_mut(grid.n_p()))
            .enumerate()
            .for_each(|(i, (r, m))| {
                let z = grid.z(i);
                for j in 0..r.len() {
                    let w = f(z, grid.p(j));
                    r[j] = w.re;
                    m[j] = w.im;
                }
            });
        ComplexField { grid, re, im }
    }

    pub fn conj(&self) -> Self {
        ComplexField {
            grid: self.grid,
            re: self.re.clone(),
            im: self.im.iter().map(|v| -v).collect(),
        }
    }

    pub fn modulus(&self) -> Vec<f64> {
        self.re.iter().zip(&self.im).map(|(a, b)| a.hypot(*b)).collect()
    }

    /// Integral of |W|.
    pub fn abs_mass(&self) -> f64 {
        self.modulus().iter().sum::<f64>() * self.grid.cell_area()
    }
}

/// ||a - b|| / ||b|| in the discrete 2-norm.
pub fn relative_l2(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (num, den) = a
        .iter()
        .zip(b)
        .fold((0.0, 0.0), |(n, d), (x, y)| (n + (x - y) * (x - y), d + y * y));
    (num / den).sqrt()
}

fn face_velocities(grid: &PhaseSpaceGrid, scn: &Scenario, force_sign: f64) -> Vec<f64> {
    let g = scn.gamma();
    let f = force_sign * scn.force();
    let dp = grid.dp();
    (0..=grid.n_p())
        .map(|k| f - g * (grid.p_min() + (k as f64 - 0.5) * dp))
        .collect()
}

fn max_phase_rate(grid: &PhaseSpaceGrid, scn: &Scenario) -> f64 {
    let h = scn.hbar();
    let lam = scn.lambda();
    let p = scn.params();
    let rate = |z: f64| (2.0 * lam * (p.b0() + p.eta() * z) / h).abs();
    rate(grid.z_min()).max(rate(grid.z_max()))
}

/// Flux through the face between `w0` and `w1`, in units of W (already
/// multiplied by dt/dx through the Courant number `nu`).
#[inline]
fn face_flux(limiter: Limiter, wm1: f64, w0: f64, w1: f64, w2: f64, nu: f64) -> f64 {
    let delta = w1 - w0;
    let upwind = if nu >= 0.0 { nu * w0 } else { nu * w1 };
    if limiter == Limiter::Upwind || delta == 0.0 {
        return upwind;
    }
    let theta = if nu >= 0.0 { w0 - wm1 } else { w2 - w1 } / delta;
    let a = nu.abs();
    upwind + 0.5 * a * (1.0 - a) * limiter.phi(theta) * delta
}

/// Constant-coefficient Crank-Nicolson factors for -r/2, 1+r, -r/2 with
/// zero Dirichlet ghosts.
#[derive(Debug, Clone)]
struct CrankNicolson {
    r: f64,
    c_prime: Vec<f64>,
    inv_denom: Vec<f64>,
}

impl CrankNicolson {
    fn new(n: usize, r: f64) -> Self {
        let a = -0.5 * r;
        let b = 1.0 + r;
        let mut c_prime = vec![0.0; n];
        let mut inv_denom = vec![0.0; n];
        let mut prev = 0.0;
        for j in 0..n {
            let denom = b - a * prev;
            inv_denom[j] = 1.0 / denom;
            c_prime[j] = a / denom;
            prev = c_prime[j];
        }
        CrankNicolson {
            r,
            c_prime,
            inv_denom,
        }
    }

    fn apply(&self, row: &mut [f64], rhs: &mut [f64]) {
        let n = row.len();
        let h = 0.5 * self.r;
        for (j, out) in rhs.iter_mut().enumerate() {
            let l = if j > 0 { row[j - 1] } else { 0.0 };
            let r = if j + 1 < n { row[j + 1] } else { 0.0 };
            *out = h * (l + r) + (1.0 - self.r) * row[j];
        }
        // forward sweep, sub-diagonal a = -r/2
        let a = -h;
        let mut prev = 0.0;
        for (v, inv) in rhs.iter_mut().zip(&self.inv_denom) {
            *v = (*v - a * prev) * inv;
            prev = *v;
        }
        row[n - 1] = rhs[n - 1];
        for j in (0..n - 1).rev() {
            row[j] = rhs[j] - self.c_prime[j] * row[j + 1];
        }
    }
}

/// Precomputed operators for one (scenario, branch, dt).
#[derive(Debug, Clone)]
struct Stepper {
    grid: PhaseSpaceGrid,
    limiter: Limiter,
    /// Courant numbers for z-transport per p-column, for dt/2.
    nu_z: Vec<f64>,
    /// Courant numbers at p-faces, for dt/2.
    nu_p: Vec<f64>,
    diffusion: Option<CrankNicolson>,
    /// (cos, sin) of the rotation per z-row.
    rotation: Option<Vec<(f64, f64)>>,
}

impl Stepper {
    fn new(scn: &Scenario, cfg: &PdeConfig, dt: f64, force_sign: f64, phase_sign: Option<f64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParams(format!("dt must be > 0, got {dt}")));
        }
        let g = cfg.grid;
        let m = scn.params().mass();
        let pmax = g.p_min().abs().max(g.p_max().abs());
        let courant_z = pmax / m * dt / g.dz();
        if courant_z > CFL_LIMIT {
            return Err(Error::CflViolation {
                axis: "z",
                courant: courant_z,
                limit: CFL_LIMIT,
            });
        }
        let vp = face_velocities(&g, scn, force_sign);
        let courant_p = vp.iter().fold(0.0f64, |a, v| a.max(v.abs())) * dt / g.dp();
        if courant_p > CFL_LIMIT {
            return Err(Error::CflViolation {
                axis: "p",
                courant: courant_p,
                limit: CFL_LIMIT,
            });
        }
        let rotation = match phase_sign {
            Some(sign) => {
                let per_step = max_phase_rate(&g, scn) * dt;
                if per_step > PHASE_LIMIT {
                    return Err(Error::PhaseUnderResolved {
                        phase_per_step: per_step,
                    });
                }
                let h = scn.hbar();
                let lam = scn.lambda();
                let p = scn.params();
                Some(
                    (0..g.n_z())
                        .map(|i| {
                            let ang = sign * 2.0 * lam * (p.b0() + p.eta() * g.z(i)) / h * dt;
                            (ang.cos(), ang.sin())
                        })
                        .collect(),
                )
            }
            None => None,
        };
        let d = scn.diffusion();
        let diffusion = (d > 0.0).then(|| CrankNicolson::new(g.n_p(), d * dt / (g.dp() * g.dp())));
        let half = 0.5 * dt;
        Ok(Stepper {
            grid: g,
            limiter: cfg.limiter,
            nu_z: (0..g.n_p()).map(|j| g.p(j) / m * half / g.dz()).collect(),
            nu_p: vp.iter().map(|v| v * half / g.dp()).collect(),
            diffusion,
            rotation,
        })
    }

    fn transport_z(&self, w: &mut [f64], faces: &mut [f64]) {
        let n_z = self.grid.n_z();
        let n_p = self.grid.n_p();
        let lim = self.limiter;
        let nu = &self.nu_z;
        let row = |i: isize| -> Option<&[f64]> {
            (i >= 0 && (i as usize) < n_z).then(|| &w[i as usize * n_p..(i as usize + 1) * n_p])
        };
        // faces[k] sits between rows k-1 and k
        faces.par_chunks_mut(n_p).enumerate().for_each(|(k, out)| {
            let k = k as isize;
            let (rm1, r0, r1, r2) = (row(k - 2), row(k - 1), row(k), row(k + 1));
            let at = |r: Option<&[f64]>, j: usize| r.map_or(0.0, |r| r[j]);
            for (j, f) in out.iter_mut().enumerate() {
                *f = face_flux(lim, at(rm1, j), at(r0, j), at(r1, j), at(r2, j), nu[j]);
            }
        });
        let faces = &*faces;
        w.par_chunks_mut(n_p).enumerate().for_each(|(i, r)| {
            let lo = &faces[i * n_p..(i + 1) * n_p];
            let hi = &faces[(i + 1) * n_p..(i + 2) * n_p];
            for ((v, h), l) in r.iter_mut().zip(hi).zip(lo) {
                *v -= h - l;
            }
        });
    }

    fn transport_p(&self, w: &mut [f64]) {
        let n_p = self.grid.n_p();
        let lim = self.limiter;
        let nu = &self.nu_p;
        w.par_chunks_mut(n_p).for_each(|r| {
            let old = r.to_vec();
            let at = |k: isize| -> f64 {
                if k >= 0 && (k as usize) < n_p {
                    old[k as usize]
                } else {
                    0.0
                }
            };
            let flux = |k: usize| {
                let k = k as isize;
                face_flux(lim, at(k - 2), at(k - 1), at(k), at(k + 1), nu[k as usize])
            };
            let mut left = flux(0);
            for (j, v) in r.iter_mut().enumerate() {
                let right = flux(j + 1);
                *v -= right - left;
                left = right;
            }
        });
    }

    fn diffuse(&self, w: &mut [f64]) {
        if let Some(cn) = &self.diffusion {
            let n_p = self.grid.n_p();
            w.par_chunks_mut(n_p).for_each_init(
                || vec![0.0; n_p],
                |rhs, r| cn.apply(r, rhs),
            );
        }
    }

    fn rotate(&self, re: &mut [f64], im: &mut [f64]) {
        if let Some(rot) = &self.rotation {
            let n_p = self.grid.n_p();
            re.par_chunks_mut(n_p)
                .zip(im.par_chunks_mut(n_p))
                .zip(rot.par_iter())
                .for_each(|((r, m), &(c, s))| {
                    for j in 0..n_p {
                        let (a, b) = (r[j], m[j]);
                        r[j] = a * c - b * s;
                        m[j] = a * s + b * c;
                    }
                });
        }
    }

    fn step_real(&self, w: &mut [f64], faces: &mut [f64]) {
        self.transport_z(w, faces);
        self.transport_p(w);
        self.diffuse(w);
        self.transport_p(w);
        self.transport_z(w, faces);
    }

    fn step_complex(&self, re: &mut [f64], im: &mut [f64], faces: &mut [f64]) {
        for w in [&mut *re, &mut *im] {
            self.transport_z(w, faces);
            self.transport_p(w);
            self.diffuse(w);
        }
        self.rotate(re, im);
        for w in [&mut *re, &mut *im] {
            self.transport_p(w);
            self.transport_z(w, faces);
        }
    }
}

fn face_buffer(grid: &PhaseSpaceGrid) -> Vec<f64> {
    vec![0.0; (grid.n_z() + 1) * grid.n_p()]
}

fn check_finite(step: usize, slices: &[&[f64]]) -> Result<()> {
    if slices.iter().all(|s| s.par_iter().all(|v| v.is_finite())) {
        Ok(())
    } else {
        Err(Error::NonFiniteField { step })
    }
}

fn check_grid(field: &PhaseSpaceGrid, cfg: &PdeConfig) -> Result<()> {
    if *field != cfg.grid {
        return Err(Error::InvalidParams("field grid differs from the solver grid".into()));
    }
    Ok(())
}

/// One step of a diagonal block.
pub fn step_diag(field: &mut RealField, branch: Branch, scn: &Scenario, cfg: &PdeConfig) -> Result<()> {
    check_grid(&field.grid, cfg)?;
    let st = Stepper::new(scn, cfg, cfg.dt, branch.sign(), None)?;
    st.step_real(&mut field.values, &mut face_buffer(&cfg.grid));
    check_finite(1, &[&field.values])
}

/// One step of the coherence block. `Branch::Plus` evolves W+-, `Minus`
/// evolves W-+ (opposite rotation).
pub fn step_offdiag(field: &mut ComplexField, branch: Branch, scn: &Scenario, cfg: &PdeConfig) -> Result<()> {
    check_grid(&field.grid, cfg)?;
    let st = Stepper::new(scn, cfg, cfg.dt, 0.0, Some(branch.sign()))?;
    st.step_complex(&mut field.re, &mut field.im, &mut face_buffer(&cfg.grid));
    check_finite(1, &[&field.re, &field.im])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditRecord {
    pub step: usize,
    pub t: f64,
    /// Integral of W (diagonal) or of |W| (coherence block).
    pub mass: f64,
    /// Fraction of the |W| integral inside the edge band.
    pub boundary_fraction: f64,
    /// Smallest node value (real part for the coherence block).
    pub min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolveReport {
    pub steps: usize,
    pub dt: f64,
    pub audits: Vec<AuditRecord>,
}

impl EvolveReport {
    /// Largest |mass - initial mass| / initial mass over the audits.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.audits.first().map_or(0.0, |a| a.mass);
        self.audits
            .iter()
            .map(|a| ((a.mass - m0) / m0).abs())
            .fold(0.0, f64::max)
    }
}

fn band_fraction(grid: &PhaseSpaceGrid, abs: &[f64], band: usize) -> f64 {
    let (n_z, n_p) = (grid.n_z(), grid.n_p());
    let band = band.min(n_z / 2).min(n_p / 2);
    let mut total = 0.0;
    let mut edge = 0.0;
    for i in 0..n_z {
        for j in 0..n_p {
            let v = abs[i * n_p + j];
            total += v;
            if i < band || i >= n_z - band || j < band || j >= n_p - band {
                edge += v;
            }
        }
    }
    if total > 0.0 {
        edge / total
    } else {
        0.0
    }
}

fn audit(step: usize, t: f64, grid: &PhaseSpaceGrid, signed: &[f64], abs: &[f64], band: usize, mass: f64) -> AuditRecord {
    AuditRecord {
        step,
        t,
        mass,
        boundary_fraction: band_fraction(grid, abs, band),
        min: signed.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

fn step_count(t_end: f64, dt_max: f64) -> Result<(usize, f64)> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParams(format!("t_end must be >= 0, got {t_end}")));
    }
    if !(dt_max > 0.0) {
        return Err(Error::InvalidParams(format!("dt must be > 0, got {dt_max}")));
    }
    if t_end == 0.0 {
        return Ok((0, dt_max));
    }
    let n = (t_end / dt_max).ceil().max(1.0) as usize;
    Ok((n, t_end / n as f64))
}

fn leak_check(rec: &AuditRecord, cfg: &PdeConfig) -> Result<()> {
    if rec.boundary_fraction > cfg.leak_tolerance {
        Err(Error::BoundaryLeak {
            step: rec.step,
            fraction: rec.boundary_fraction,
        })
    } else {
        Ok(())
    }
}

/// Evolves a diagonal block to `t_end` with audits every `cfg.audit_every`
/// steps and at the end.
pub fn evolve_diag(
    initial: &RealField,
    branch: Branch,
    scn: &Scenario,
    cfg: &PdeConfig,
    t_end: f64,
) -> Result<(RealField, EvolveReport)> {
    check_grid(&initial.grid, cfg)?;
    let (n, dt) = step_count(t_end, cfg.dt)?;
    let mut field = initial.clone();
    let grid = cfg.grid;
    let rec = |step: usize, f: &RealField| {
        let abs: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
        audit(step, step as f64 * dt, &grid, &f.values, &abs, cfg.boundary_band, f.mass())
    };
    let mut audits = vec![rec(0, &field)];
    if n > 0 {
        let st = Stepper::new(scn, cfg, dt, branch.sign(), None)?;
        let mut faces = face_buffer(&grid);
        for k in 1..=n {
            st.step_real(&mut field.values, &mut faces);
            check_finite(k, &[&field.values])?;
            if k % cfg.audit_every.max(1) == 0 || k == n {
                let mut r = rec(k, &field);
                if k == n {
                    r.t = t_end;
                }
                leak_check(&r, cfg)?;
                audits.push(r);
            }
        }
    }
    Ok((field, EvolveReport { steps: n, dt, audits }))
}

/// Evolves the coherence block (`Plus` = W+-, `Minus` = W-+) to `t_end`.
pub fn evolve_offdiag(
    initial: &ComplexField,
    branch: Branch,
    scn: &Scenario,
    cfg: &PdeConfig,
    t_end: f64,
) -> Result<(ComplexField, EvolveReport)> {
    check_grid(&initial.grid, cfg)?;
    let (n, dt) = step_count(t_end, cfg.dt)?;
    let mut field = initial.clone();
    let grid = cfg.grid;
    let rec = |step: usize, f: &ComplexField| {
        let abs = f.modulus();
        let mass = abs.iter().sum::<f64>() * grid.cell_area();
        audit(step, step as f64 * dt, &grid, &f.re, &abs, cfg.boundary_band, mass)
    };
    let mut audits = vec![rec(0, &field)];
    if n > 0 {
        let st = Stepper::new(scn, cfg, dt, 0.0, Some(branch.sign()))?;
        let mut faces = face_buffer(&grid);
        for k in 1..=n {
            st.step_complex(&mut field.re, &mut field.im, &mut faces);
            check_finite(k, &[&field.re, &field.im])?;
            if k % cfg.audit_every.max(1) == 0 || k == n {
                let mut r = rec(k, &field);
                if k == n {
                    r.t = t_end;
                }
                leak_check(&r, cfg)?;
                audits.push(r);
            }
        }
    }
    Ok((field, EvolveReport { steps: n, dt, audits }))
}

/// Nondimensional scenario (hbar = m = sigma = k_B = mu_B = 1, g_s = 2, so
/// lambda = 1 and D = 2 gamma T).
pub fn nondim_scenario(gamma: f64, temperature: f64, eta: f64, b0: f64) -> Result<Scenario> {
    let p = ExperimentParams::new(1.0, 2.0, b0, eta, 1.0, temperature, gamma, SpinState::x_up())?;
    Ok(Scenario::new(p, PhysicalConstants::NONDIMENSIONAL))
}

/// Diagonal validation case: gamma = 0.1, D = 0.05, eta lambda = 1.
pub fn diag_validation_scenario() -> Scenario {
    nondim_scenario(0.1, 0.25, 1.0, 0.0).expect("valid constants")
}

/// Coherence validation case: as the diagonal one with 2 eta lambda/hbar = 5, B0 = 0.
pub fn offdiag_validation_scenario() -> Scenario {
    nondim_scenario(0.1, 0.25, 2.5, 0.0).expect("valid constants")
}

/// Symmetric box holding both blocks from t = 0 to `t_end` with `padding`
/// widths of margin.
pub fn validation_grid(scn: &Scenario, t_end: f64, n: usize, padding: f64) -> Result<PhaseSpaceGrid> {
    let (m0, m1) = (moments(0.0, scn), moments(t_end, scn));
    let zh = (m0.z_c + padding * m0.sigma_z).max(m1.z_c + padding * m1.sigma_z);
    let ph = (m0.p_c + padding * m0.sigma_p).max(m1.p_c + padding * m1.sigma_p);
    PhaseSpaceGrid::symmetric(zh, ph, n, n)
}

/// Padding of the validation box, in Gaussian widths.
pub const VALIDATION_PADDING: f64 = 8.0;
/// Courant number targeted by the validation runs.
pub const VALIDATION_COURANT: f64 = 0.5;

/// Result of one solver-versus-closed-form comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationRun {
    pub case: &'static str,
    pub n: usize,
    pub t_end: f64,
    pub limiter: Limiter,
    pub l2_error: f64,
    pub report: EvolveReport,
    pub seconds: f64,
}

fn validation_config(scn: &Scenario, t_end: f64, n: usize, limiter: Limiter, phase: bool) -> Result<PdeConfig> {
    let grid = validation_grid(scn, t_end, n, VALIDATION_PADDING)?;
    let dt = PdeConfig::max_stable_dt(&grid, scn, !phase, phase) * VALIDATION_COURANT / CFL_LIMIT;
    Ok(PdeConfig::new(grid, dt).with_limiter(limiter))
}

/// Evolves W++ from the initial Gaussian and compares with the closed form.
pub fn validate_diag(scn: &Scenario, t_end: f64, n: usize, limiter: Limiter) -> Result<(ValidationRun, RealField)> {
    let cfg = validation_config(scn, t_end, n, limiter, false)?;
    let (s, h) = (scn.params().sigma(), scn.hbar());
    let init = RealField::from_fn(cfg.grid, |z, p| crate::closedform::initial_wigner(z, p, s, h));
    let clock = Instant::now();
    let (out, report) = evolve_diag(&init, Branch::Plus, scn, &cfg, t_end)?;
    let seconds = clock.elapsed().as_secs_f64();
    let exact_state = DiagState::new(scn, t_end, Branch::Plus)?;
    let exact = RealField::from_fn(cfg.grid, |z, p| exact_state.eval(z, p));
    Ok((
        ValidationRun {
            case: "diag",
            n,
            t_end,
            limiter,
            l2_error: relative_l2(&out.values, &exact.values),
            report,
            seconds,
        },
        out,
    ))
}

/// Evolves W+- from the initial Gaussian and compares |W+-| with the closed form.
pub fn validate_offdiag(scn: &Scenario, t_end: f64, n: usize, limiter: Limiter) -> Result<(ValidationRun, ComplexField)> {
    let cfg = validation_config(scn, t_end, n, limiter, true)?;
    let (s, h) = (scn.params().sigma(), scn.hbar());
    let init = ComplexField::from_fn(cfg.grid, |z, p| {
        Complex64::new(crate::closedform::initial_wigner(z, p, s, h), 0.0)
    });
    let clock = Instant::now();
    let (out, report) = evolve_offdiag(&init, Branch::Plus, scn, &cfg, t_end)?;
    let seconds = clock.elapsed().as_secs_f64();
    let exact_state = OffDiagState::new(scn, t_end)?;
    let exact = RealField::from_fn(cfg.grid, |z, p| exact_state.modulus(z, p));
    Ok((
        ValidationRun {
            case: "offdiag",
            n,
            t_end,
            limiter,
            l2_error: relative_l2(&out.modulus(), &exact.values),
            report,
            seconds,
        },
        out,
    ))
}
