//! Analytic matrix Wigner function.
//!
//! Coefficients are evaluated with every power of gamma cancelled by hand,
//! i.e. in terms of `t` and O(1) functions of `tau`, so nothing overflows at
//! large gamma and nothing cancels at small tau. The conventionally normalized
//! quantities (F, G, C1..C6) are recovered on request.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::marginals::{moments_with, Branch, GaussianMoments};
use crate::params::Scenario;
use crate::series::TauFunctions;

/// Spinless Gaussian initial state exp(-z^2/s^2 - s^2 p^2/hbar^2)/(pi hbar).
pub fn initial_wigner(z: f64, p: f64, sigma: f64, hbar: f64) -> f64 {
    let a = z / sigma;
    let b = sigma * p / hbar;
    (-a * a - b * b).exp() / (std::f64::consts::PI * hbar)
}

fn require_gamma(scn: &Scenario) -> Result<()> {
    if scn.gamma() > 0.0 {
        Ok(())
    } else {
        Err(Error::GammaZero)
    }
}

/// Exponent numerator F and denominator G of a diagonal block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagKernel {
    pub f: f64,
    pub g: f64,
    pub z_prime: f64,
    pub p_prime: f64,
}

/// Per-time state of one diagonal block: W = m s/(pi sqrt(g)) exp(-f/g) with
/// f = a_zz z'^2 + 2 a_zp z'p' + a_pp p'^2. These are F and G divided by
/// gamma^4.
#[derive(Debug, Clone, Copy)]
pub struct DiagState {
    branch: Branch,
    moments: GaussianMoments,
    a_zz: f64,
    a_zp: f64,
    a_pp: f64,
    g: f64,
    prefactor: f64,
}

impl DiagState {
    pub fn new(scn: &Scenario, t: f64, branch: Branch) -> Result<Self> {
        require_gamma(scn)?;
        check_time(t)?;
        let f = TauFunctions::new(scn.tau(t));
        Ok(Self::from_tau_functions(scn, t, &f, branch))
    }

    fn from_tau_functions(scn: &Scenario, t: f64, f: &TauFunctions, branch: Branch) -> Self {
        let p = scn.params();
        let (m, s, h, d) = (p.mass(), p.sigma(), scn.hbar(), scn.diffusion());
        let (s2, h2) = (s * s, h * h);
        let ta = t * f.phi_a;
        let a_zz = 4.0 * d * s2 * m * m * t * f.phi_b + h2 * m * m * f.e2;
        let a_zp = -2.0 * d * s2 * m * ta * ta - h2 * ta * m * f.e1;
        let a_pp = 2.0 * d * s2 * t.powi(3) * f.phi_sz + m * m * s2 * s2 + h2 * ta * ta;
        let g = 8.0 * d * d * s2 * t.powi(4) * f.phi_a * f.phi_g1
            + 2.0 * d * (2.0 * m * m * s2 * s2 * t * f.phi_b + t.powi(3) * f.phi_g2 * h2)
            + m * m * s2 * f.e2 * h2;
        DiagState {
            branch,
            moments: moments_with(t, f, scn),
            a_zz,
            a_zp,
            a_pp,
            g,
            prefactor: m * s / (std::f64::consts::PI * g.sqrt()),
        }
    }

    pub fn moments(&self) -> &GaussianMoments {
        &self.moments
    }

    /// F/gamma^4 at centered coordinates.
    pub fn f_centered(&self, zp: f64, pp: f64) -> f64 {
        self.a_zz * zp * zp + 2.0 * self.a_zp * zp * pp + self.a_pp * pp * pp
    }

    /// G/gamma^4.
    pub fn g_scaled(&self) -> f64 {
        self.g
    }

    pub fn centered(&self, z: f64, p: f64) -> (f64, f64) {
        (
            z - self.moments.z_center(self.branch),
            p - self.moments.p_center(self.branch),
        )
    }

    pub fn eval(&self, z: f64, p: f64) -> f64 {
        let (zp, pp) = self.centered(z, p);
        self.prefactor * (-self.f_centered(zp, pp) / self.g).exp()
    }

    pub fn peak(&self) -> f64 {
        self.prefactor
    }

    /// Matrix A with W = peak * exp(-q^T A q / 2) in centered coordinates.
    pub fn quadratic_form(&self) -> [[f64; 2]; 2] {
        let k = 2.0 / self.g;
        [[k * self.a_zz, k * self.a_zp], [k * self.a_zp, k * self.a_pp]]
    }

    pub fn center(&self) -> (f64, f64) {
        (
            self.moments.z_center(self.branch),
            self.moments.p_center(self.branch),
        )
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("time must be finite and >= 0, got {t}")))
    }
}

fn tau_to_t(tau: f64, scn: &Scenario) -> Result<f64> {
    require_gamma(scn)?;
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParams(format!("tau must be finite and >= 0, got {tau}")));
    }
    Ok(tau / scn.gamma())
}

/// F and G as printed (gamma^4 restored) for centered coordinates.
pub fn diag_kernel_centered(zp: f64, pp: f64, tau: f64, scn: &Scenario) -> Result<DiagKernel> {
    let t = tau_to_t(tau, scn)?;
    let st = DiagState::from_tau_functions(scn, t, &TauFunctions::new(tau), Branch::Plus);
    let g4 = scn.gamma().powi(4);
    Ok(DiagKernel {
        f: st.f_centered(zp, pp) * g4,
        g: st.g * g4,
        z_prime: zp,
        p_prime: pp,
    })
}

/// F and G at raw phase-space coordinates for the given branch.
pub fn diag_kernel(z: f64, p: f64, tau: f64, branch: Branch, scn: &Scenario) -> Result<DiagKernel> {
    let t = tau_to_t(tau, scn)?;
    let st = DiagState::from_tau_functions(scn, t, &TauFunctions::new(tau), branch);
    let (zp, pp) = st.centered(z, p);
    let g4 = scn.gamma().powi(4);
    Ok(DiagKernel {
        f: st.f_centered(zp, pp) * g4,
        g: st.g * g4,
        z_prime: zp,
        p_prime: pp,
    })
}

/// Diagonal block W++ (`Plus`) or W-- (`Minus`).
pub fn w_diag(z: f64, p: f64, t: f64, branch: Branch, scn: &Scenario) -> Result<f64> {
    Ok(DiagState::new(scn, t, branch)?.eval(z, p))
}

/// C1..C6 as printed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffDiagCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

fn coeffs_at(scn: &Scenario, t: f64, f: &TauFunctions) -> OffDiagCoeffs {
    let p = scn.params();
    let (m, s, h, d) = (p.mass(), p.sigma(), scn.hbar(), scn.diffusion());
    let (s2, h2, m2) = (s * s, h * h, m * m);
    let el = scn.force();
    let tz = t * t * f.phi_zc;
    let ta = t * f.phi_a;
    OffDiagCoeffs {
        c1: el * el * (s2 * (d * t.powi(5) * f.phi_k1 - 3.0 * m2 * s2 * t * t) - 3.0 * tz * tz * h2)
            / (3.0 * m2 * s2 * h2),
        c2: -el * (h2 * f.e1 * tz + 2.0 * d * s2 * t.powi(3) * f.phi_k2) / (h2 * m * s2),
        c3: (-2.0 * d * s2 * t.powi(3) * f.phi_sz - m2 * s2 * s2 - h2 * ta * ta) / (4.0 * m2 * s2),
        c4: -el * (ta * tz * h2 + s2 * (2.0 * d * tz * tz + m2 * s2 * t)) / (m2 * s2 * h),
        c5: -ta * (f.e1 * h2 + 2.0 * d * s2 * ta) / (2.0 * m * s2 * h),
        c6: (f.e2 * h2 + 4.0 * d * s2 * t * f.phi_b) / (4.0 * s2 * h2),
    }
}

/// C1..C6 at dimensionless time `tau`.
pub fn offdiag_coeffs(tau: f64, scn: &Scenario) -> Result<OffDiagCoeffs> {
    let t = tau_to_t(tau, scn)?;
    Ok(coeffs_at(scn, t, &TauFunctions::new(tau)))
}

/// Smallest accepted value of the off-diagonal discriminant.
pub const MIN_DISCRIMINANT: f64 = 1e-300;

/// Per-time state of W+-.
///
/// The exponent is written as `E = c0 + kappa beta^2 + z^2/(4 C3)` (real part)
/// and `phase0 - 2 kappa alpha beta + C4 z/(2 C3)` (imaginary part), with
/// `beta = -C5 hbar z + 2 C3 p`. The discriminant `q = -(4 C3 C6 + C5^2)` is
/// positive and equals det(covariance)/hbar^2; it is taken from G, which is
/// a sum of positive terms.
#[derive(Debug, Clone, Copy)]
pub struct OffDiagState {
    coeffs: OffDiagCoeffs,
    hbar: f64,
    q: f64,
    kappa: f64,
    alpha: f64,
    c0: f64,
    log_norm: f64,
    phase0: f64,
}

impl OffDiagState {
    pub fn new(scn: &Scenario, t: f64) -> Result<Self> {
        require_gamma(scn)?;
        check_time(t)?;
        let f = TauFunctions::new(scn.tau(t));
        let c = coeffs_at(scn, t, &f);
        let diag = DiagState::from_tau_functions(scn, t, &f, Branch::Plus);
        let p = scn.params();
        let (m, s, h) = (p.mass(), p.sigma(), scn.hbar());
        let q = diag.g / (4.0 * (m * s * h).powi(2));
        if !(q > MIN_DISCRIMINANT) || !q.is_finite() {
            return Err(Error::DegenerateQuadratic {
                tau: f.tau,
                discriminant: q,
            });
        }
        let kappa = 1.0 / (4.0 * c.c3 * h * h * q);
        let alpha = (-2.0 * c.c2 * c.c3 + c.c4 * c.c5) * h;
        let c0 = c.c1 - kappa * alpha * alpha - c.c4 * c.c4 / (4.0 * c.c3);
        Ok(OffDiagState {
            coeffs: c,
            hbar: h,
            q,
            kappa,
            alpha,
            c0,
            log_norm: -(2.0 * std::f64::consts::PI * h * q.sqrt()).ln(),
            phase0: 2.0 * p.b0() * scn.lambda() * t / h,
        })
    }

    pub fn coeffs(&self) -> &OffDiagCoeffs {
        &self.coeffs
    }

    /// -(4 C3 C6 + C5^2), the discriminant that appears in the exponent.
    pub fn discriminant(&self) -> f64 {
        self.q
    }

    /// Constant part of the real exponent (zero at t = 0).
    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// ln of 1/(2 pi hbar sqrt(q)).
    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    fn beta(&self, z: f64, p: f64) -> f64 {
        -self.coeffs.c5 * self.hbar * z + 2.0 * self.coeffs.c3 * p
    }

    /// Real exponent without the normalization.
    pub fn re_exponent(&self, z: f64, p: f64) -> f64 {
        let b = self.beta(z, p);
        self.c0 + self.kappa * b * b + z * z / (4.0 * self.coeffs.c3)
    }

    pub fn im_exponent(&self, z: f64, p: f64) -> f64 {
        let b = self.beta(z, p);
        self.phase0 - 2.0 * self.kappa * self.alpha * b + self.coeffs.c4 * z / (2.0 * self.coeffs.c3)
    }

    pub fn modulus(&self, z: f64, p: f64) -> f64 {
        (self.log_norm + self.re_exponent(z, p)).exp()
    }

    pub fn eval(&self, z: f64, p: f64) -> Complex64 {
        Complex64::from_polar(self.modulus(z, p), self.im_exponent(z, p))
    }

    /// Matrix `A` with `|W+-| = N exp(c0 - q^T A q / 2)`, q = (z, p).
    pub fn quadratic_form(&self) -> [[f64; 2]; 2] {
        let c = &self.coeffs;
        let k = self.kappa;
        let h = self.hbar;
        let zz = -2.0 * (k * c.c5 * c.c5 * h * h + 1.0 / (4.0 * c.c3));
        let zp = 4.0 * k * c.c5 * h * c.c3;
        let pp = -8.0 * k * c.c3 * c.c3;
        [[zz, zp], [zp, pp]]
    }
}

/// Off-diagonal block W+- including the global phase.
pub fn w_offdiag(z: f64, p: f64, t: f64, scn: &Scenario) -> Result<Complex64> {
    Ok(OffDiagState::new(scn, t)?.eval(z, p))
}

/// 2x2 matrix Wigner function at one phase-space point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerMatrixSample {
    pub w_pp: f64,
    pub w_mm: f64,
    pub w_pm: Complex64,
}

impl WignerMatrixSample {
    /// W-+, the conjugate of W+-.
    pub fn w_mp(&self) -> Complex64 {
        self.w_pm.conj()
    }

    pub fn trace(&self) -> f64 {
        self.w_pp + self.w_mm
    }
}

/// All three blocks at one time, ready to be evaluated at many points.
#[derive(Debug, Clone, Copy)]
pub struct WignerAt {
    plus: DiagState,
    minus: DiagState,
    off: OffDiagState,
    w_up: f64,
    w_down: f64,
    coherence: Complex64,
}

impl WignerAt {
    pub fn new(scn: &Scenario, t: f64) -> Result<Self> {
        let spin = scn.params().spin();
        Ok(WignerAt {
            plus: DiagState::new(scn, t, Branch::Plus)?,
            minus: DiagState::new(scn, t, Branch::Minus)?,
            off: OffDiagState::new(scn, t)?,
            w_up: spin.weight_up(),
            w_down: spin.weight_down(),
            coherence: spin.coherence(),
        })
    }

    pub fn diag(&self, branch: Branch) -> &DiagState {
        match branch {
            Branch::Plus => &self.plus,
            Branch::Minus => &self.minus,
        }
    }

    pub fn offdiag(&self) -> &OffDiagState {
        &self.off
    }

    pub fn matrix(&self, z: f64, p: f64) -> WignerMatrixSample {
        WignerMatrixSample {
            w_pp: self.w_up * self.plus.eval(z, p),
            w_mm: self.w_down * self.minus.eval(z, p),
            w_pm: self.coherence * self.off.eval(z, p),
        }
    }

    pub fn trace(&self, z: f64, p: f64) -> f64 {
        self.w_up * self.plus.eval(z, p) + self.w_down * self.minus.eval(z, p)
    }
}

pub fn wigner_matrix(z: f64, p: f64, t: f64, scn: &Scenario) -> Result<WignerMatrixSample> {
    Ok(WignerAt::new(scn, t)?.matrix(z, p))
}
