//! Physical constants, experiment parameters and the quantities derived
//! from them.
//!
//! Constants are carried as values rather than baked in so the same code can
//! run in SI units (the `silver-sg` preset) or in nondimensional units where
//! hbar = m = sigma = 1.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// hbar, k_B and mu_B in whatever unit system the caller works in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Bohr magneton, J/T.
    pub mu_b: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values.
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        hbar: 1.054_571_817e-34,
        k_b: 1.380_649e-23,
        mu_b: 9.274_010_078_3e-24,
    };

    /// All three constants set to one.
    pub const NONDIMENSIONAL: PhysicalConstants = PhysicalConstants {
        hbar: 1.0,
        k_b: 1.0,
        mu_b: 1.0,
    };

    pub fn new(hbar: f64, k_b: f64, mu_b: f64) -> Result<Self> {
        let c = PhysicalConstants { hbar, k_b, mu_b };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("hbar", self.hbar), ("k_B", self.k_b), ("mu_B", self.mu_b)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Normalized spin state a|+> + b|->.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState {
    a: Complex64,
    b: Complex64,
}

impl SpinState {
    /// Builds the state and rescales it to unit norm.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParams(
                "spin amplitudes must not both vanish".into(),
            ));
        }
        Ok(SpinState {
            a: a / norm,
            b: b / norm,
        })
    }

    /// |S_x = +hbar/2>, the state used for the silver beam.
    pub fn x_up() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        SpinState {
            a: Complex64::new(h, 0.0),
            b: Complex64::new(h, 0.0),
        }
    }

    pub fn z_up() -> Self {
        SpinState {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// Weight |a|^2 of the W++ block.
    pub fn weight_up(&self) -> f64 {
        self.a.norm_sqr()
    }

    /// Weight |b|^2 of the W-- block.
    pub fn weight_down(&self) -> f64 {
        self.b.norm_sqr()
    }

    /// Prefactor a b* of the W+- block.
    pub fn coherence(&self) -> Complex64 {
        self.a * self.b.conj()
    }
}

/// Inputs describing one Stern-Gerlach run along the gradient axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentParams {
    mass: f64,
    g_s: f64,
    b0: f64,
    eta: f64,
    sigma: f64,
    temperature: f64,
    gamma: f64,
    spin: SpinState,
}

impl ExperimentParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mass: f64,
        g_s: f64,
        b0: f64,
        eta: f64,
        sigma: f64,
        temperature: f64,
        gamma: f64,
        spin: SpinState,
    ) -> Result<Self> {
        let p = ExperimentParams {
            mass,
            g_s,
            b0,
            eta,
            sigma,
            temperature,
            gamma,
            spin,
        };
        p.validate()?;
        Ok(p)
    }

    /// Silver atoms, B0 = 5 T, eta = 1000 T/m, sigma = 10 um, T = 300 K,
    /// x-polarized, gamma = 1/s.
    pub fn silver_sg() -> Self {
        ExperimentParams {
            mass: 1.8e-25,
            g_s: 2.0,
            b0: 5.0,
            eta: 1000.0,
            sigma: 1e-5,
            temperature: 300.0,
            gamma: 1.0,
            spin: SpinState::x_up(),
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = [("mass", self.mass), ("sigma", self.sigma)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")));
            }
        }
        let non_negative = [
            ("temperature", self.temperature),
            ("gamma", self.gamma),
            ("eta", self.eta),
            ("B0", self.b0),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !self.g_s.is_finite() {
            return Err(Error::InvalidParams("g_s must be finite".into()));
        }
        Ok(())
    }

    fn with(mut self, f: impl FnOnce(&mut Self)) -> Result<Self> {
        f(&mut self);
        self.validate()?;
        Ok(self)
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        self.with(|p| p.gamma = gamma)
    }

    pub fn with_temperature(self, temperature: f64) -> Result<Self> {
        self.with(|p| p.temperature = temperature)
    }

    pub fn with_b0(self, b0: f64) -> Result<Self> {
        self.with(|p| p.b0 = b0)
    }

    pub fn with_eta(self, eta: f64) -> Result<Self> {
        self.with(|p| p.eta = eta)
    }

    pub fn with_mass(self, mass: f64) -> Result<Self> {
        self.with(|p| p.mass = mass)
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        self.with(|p| p.sigma = sigma)
    }

    pub fn with_g_s(self, g_s: f64) -> Result<Self> {
        self.with(|p| p.g_s = g_s)
    }

    pub fn with_spin(mut self, spin: SpinState) -> Self {
        self.spin = spin;
        self
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn g_s(&self) -> f64 {
        self.g_s
    }
    pub fn b0(&self) -> f64 {
        self.b0
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn temperature(&self) -> f64 {
        self.temperature
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn spin(&self) -> SpinState {
        self.spin
    }
}

/// lambda = g_s mu_B / 2 and the momentum diffusion D = 2 m gamma k_B T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// J/T
    pub lambda: f64,
    /// kg^2 m^2 / s^3
    pub diffusion: f64,
}

pub fn derive(params: &ExperimentParams, consts: &PhysicalConstants) -> DerivedParams {
    DerivedParams {
        lambda: params.g_s * consts.mu_b / 2.0,
        diffusion: 2.0 * params.mass * params.gamma * consts.k_b * params.temperature,
    }
}

/// Dimensionless time gamma * t.
pub fn tau(t: f64, gamma: f64) -> f64 {
    gamma * t
}

/// A complete, validated run description: parameters, constants and the
/// beam kinematics that fix the default time horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    params: ExperimentParams,
    consts: PhysicalConstants,
    derived: DerivedParams,
    beam_speed: f64,
    tube_length: f64,
}

impl Scenario {
    pub fn new(params: ExperimentParams, consts: PhysicalConstants) -> Self {
        Scenario {
            params,
            consts,
            derived: derive(&params, &consts),
            beam_speed: 500.0,
            tube_length: 0.2,
        }
    }

    /// The built-in `silver-sg` configuration.
    pub fn silver_sg() -> Self {
        Self::new(ExperimentParams::silver_sg(), PhysicalConstants::CODATA)
    }

    pub fn with_beam(mut self, speed: f64, tube_length: f64) -> Result<Self> {
        if !(speed > 0.0 && tube_length > 0.0) {
            return Err(Error::InvalidParams(
                "beam speed and tube length must be positive".into(),
            ));
        }
        self.beam_speed = speed;
        self.tube_length = tube_length;
        Ok(self)
    }

    /// Same scenario with a different damping rate (D follows).
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Ok(Self {
            params: self.params.with_gamma(gamma)?,
            ..*self
        }
        .rederive())
    }

    pub fn with_params(&self, params: ExperimentParams) -> Self {
        Self { params, ..*self }.rederive()
    }

    fn rederive(mut self) -> Self {
        self.derived = derive(&self.params, &self.consts);
        self
    }

    pub fn params(&self) -> &ExperimentParams {
        &self.params
    }
    pub fn consts(&self) -> &PhysicalConstants {
        &self.consts
    }
    pub fn derived(&self) -> DerivedParams {
        self.derived
    }
    pub fn lambda(&self) -> f64 {
        self.derived.lambda
    }
    pub fn diffusion(&self) -> f64 {
        self.derived.diffusion
    }
    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }
    pub fn hbar(&self) -> f64 {
        self.consts.hbar
    }
    /// Magnitude eta * lambda of the spin-dependent force.
    pub fn force(&self) -> f64 {
        self.params.eta * self.derived.lambda
    }
    pub fn tau(&self, t: f64) -> f64 {
        tau(t, self.params.gamma)
    }
    pub fn beam_speed(&self) -> f64 {
        self.beam_speed
    }
    pub fn tube_length(&self) -> f64 {
        self.tube_length
    }

    /// Time of flight through the magnet, used as the default end time.
    pub fn flight_time(&self) -> f64 {
        self.tube_length / self.beam_speed
    }

    /// 2 D sigma^2 / (gamma hbar^2), which reduces to 4 m k_B T sigma^2 / hbar^2
    /// and does not depend on gamma.
    pub fn width_ratio(&self) -> f64 {
        let p = &self.params;
        4.0 * p.mass * self.consts.k_b * p.temperature * p.sigma * p.sigma
            / (self.consts.hbar * self.consts.hbar)
    }

    /// Loads a scenario from a flat JSON config; missing keys fall back to
    /// `silver-sg`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("scenario config: {e}")))?;
        cfg.into_scenario()
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn to_config(&self) -> ScenarioConfig {
        let p = &self.params;
        ScenarioConfig {
            mass_kg: Some(p.mass),
            g_s: Some(p.g_s),
            b0_t: Some(p.b0),
            eta_t_per_m: Some(p.eta),
            sigma_m: Some(p.sigma),
            t_k: Some(p.temperature),
            gamma_per_s: Some(p.gamma),
            spin_a_re: Some(p.spin.a.re),
            spin_a_im: Some(p.spin.a.im),
            spin_b_re: Some(p.spin.b.re),
            spin_b_im: Some(p.spin.b.im),
            beam_speed_m_per_s: Some(self.beam_speed),
            tube_length_m: Some(self.tube_length),
            hbar: Some(self.consts.hbar),
            k_b: Some(self.consts.k_b),
            mu_b: Some(self.consts.mu_b),
        }
    }
}

/// On-disk scenario description. All keys are optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_s: Option<f64>,
    #[serde(rename = "B0_T", skip_serializing_if = "Option::is_none")]
    pub b0_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_t_per_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_m: Option<f64>,
    #[serde(rename = "T_K", skip_serializing_if = "Option::is_none")]
    pub t_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_per_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_a_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_a_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_b_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_b_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beam_speed_m_per_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tube_length_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(rename = "k_B", skip_serializing_if = "Option::is_none")]
    pub k_b: Option<f64>,
    #[serde(rename = "mu_B", skip_serializing_if = "Option::is_none")]
    pub mu_b: Option<f64>,
}

impl ScenarioConfig {
    pub fn into_scenario(self) -> Result<Scenario> {
        let base = Scenario::silver_sg();
        let bp = base.params;
        let spin_given = [self.spin_a_re, self.spin_a_im, self.spin_b_re, self.spin_b_im]
            .iter()
            .any(Option::is_some);
        let spin = if spin_given {
            SpinState::new(
                Complex64::new(self.spin_a_re.unwrap_or(0.0), self.spin_a_im.unwrap_or(0.0)),
                Complex64::new(self.spin_b_re.unwrap_or(0.0), self.spin_b_im.unwrap_or(0.0)),
            )?
        } else {
            bp.spin
        };
        let params = ExperimentParams::new(
            self.mass_kg.unwrap_or(bp.mass),
            self.g_s.unwrap_or(bp.g_s),
            self.b0_t.unwrap_or(bp.b0),
            self.eta_t_per_m.unwrap_or(bp.eta),
            self.sigma_m.unwrap_or(bp.sigma),
            self.t_k.unwrap_or(bp.temperature),
            self.gamma_per_s.unwrap_or(bp.gamma),
            spin,
        )?;
        let bc = base.consts;
        let consts = PhysicalConstants::new(
            self.hbar.unwrap_or(bc.hbar),
            self.k_b.unwrap_or(bc.k_b),
            self.mu_b.unwrap_or(bc.mu_b),
        )?;
        Scenario::new(params, consts).with_beam(
            self.beam_speed_m_per_s.unwrap_or(base.beam_speed),
            self.tube_length_m.unwrap_or(base.tube_length),
        )
    }
}

/// Residual-gas data used to estimate the damping rate from viscosity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacuumParams {
    /// Radius R of the beam atom, m.
    pub atom_radius: f64,
    /// Gas number density n, 1/m^3.
    pub number_density: f64,
    /// Molecular mass M_M of the gas, kg.
    pub molecular_mass: f64,
    /// Mean molecular speed v_M, m/s.
    pub mean_speed: f64,
    /// Mean free path lambda_M, m.
    pub mean_free_path: f64,
}

impl VacuumParams {
    pub fn new(
        atom_radius: f64,
        number_density: f64,
        molecular_mass: f64,
        mean_speed: f64,
        mean_free_path: f64,
    ) -> Result<Self> {
        let v = VacuumParams {
            atom_radius,
            number_density,
            molecular_mass,
            mean_speed,
            mean_free_path,
        };
        for (name, x) in [
            ("atom_radius", atom_radius),
            ("number_density", number_density),
            ("molecular_mass", molecular_mass),
            ("mean_speed", mean_speed),
            ("mean_free_path", mean_free_path),
        ] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {x}")));
            }
        }
        Ok(v)
    }

    /// Beam pipe at ~1e-6 mbar filled with N2: n = 1e10 cm^-3, lambda_M = 1e4 cm,
    /// v_M = 500 m/s, M_M = 28 u, silver radius 144 pm.
    pub fn beam_pipe() -> Self {
        VacuumParams {
            atom_radius: 144e-12,
            number_density: 1e16,
            molecular_mass: 4.65e-26,
            mean_speed: 500.0,
            mean_free_path: 100.0,
        }
    }
}

/// Viscosity mu = 2.994 pi R n M_M v_M lambda_M, kg/s.
pub fn viscosity(vac: &VacuumParams) -> f64 {
    2.994
        * std::f64::consts::PI
        * vac.atom_radius
        * vac.number_density
        * vac.molecular_mass
        * vac.mean_speed
        * vac.mean_free_path
}

/// Damping rate gamma = mu / (2 m).
pub fn estimate_gamma(vac: &VacuumParams, atom_mass: f64) -> f64 {
    viscosity(vac) / (2.0 * atom_mass)
}

/// JSON form of [`VacuumParams`] plus the beam-atom mass.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VacuumConfig {
    pub atom_radius_m: Option<f64>,
    pub number_density_per_m3: Option<f64>,
    pub molecular_mass_kg: Option<f64>,
    pub mean_speed_m_per_s: Option<f64>,
    pub mean_free_path_m: Option<f64>,
    pub atom_mass_kg: Option<f64>,
}

impl VacuumConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("vacuum config: {e}")))
    }

    /// Resolves missing keys against [`VacuumParams::beam_pipe`] and the silver mass.
    pub fn resolve(&self) -> Result<(VacuumParams, f64)> {
        let d = VacuumParams::beam_pipe();
        let vac = VacuumParams::new(
            self.atom_radius_m.unwrap_or(d.atom_radius),
            self.number_density_per_m3.unwrap_or(d.number_density),
            self.molecular_mass_kg.unwrap_or(d.molecular_mass),
            self.mean_speed_m_per_s.unwrap_or(d.mean_speed),
            self.mean_free_path_m.unwrap_or(d.mean_free_path),
        )?;
        let mass = self.atom_mass_kg.unwrap_or(ExperimentParams::silver_sg().mass);
        if !(mass > 0.0) {
            return Err(Error::InvalidParams("atom mass must be > 0".into()));
        }
        Ok((vac, mass))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn lambda_is_half_gs_mu_b() {
        let p = ExperimentParams::silver_sg();
        let c = PhysicalConstants::new(1.0545718e-34, 1.3807e-23, 9.274e-24).unwrap();
        let d = derive(&p, &c);
        assert!(rel(d.lambda, 9.274e-24) < 1e-15);
    }

    #[test]
    fn diffusion_matches_hand_value() {
        // 2 * 1.8e-25 * 1 * 1.3807e-23 * 300 = 1.491156e-45
        let p = ExperimentParams::silver_sg();
        let c = PhysicalConstants::new(1.0545718e-34, 1.3807e-23, 9.274e-24).unwrap();
        let d = derive(&p, &c);
        assert!(rel(d.diffusion, 1.491_156e-45) < 1e-12);
    }

    #[test]
    fn zero_gamma_or_temperature_gives_zero_diffusion() {
        let c = PhysicalConstants::CODATA;
        let p = ExperimentParams::silver_sg().with_gamma(0.0).unwrap();
        assert_eq!(derive(&p, &c).diffusion, 0.0);
        let p = ExperimentParams::silver_sg().with_temperature(0.0).unwrap();
        assert_eq!(derive(&p, &c).diffusion, 0.0);
    }

    #[test]
    fn diffusion_scales_with_gamma() {
        let c = PhysicalConstants::CODATA;
        let p1 = ExperimentParams::silver_sg().with_gamma(3.5).unwrap();
        let p2 = ExperimentParams::silver_sg().with_gamma(7.0).unwrap();
        assert_eq!(2.0 * derive(&p1, &c).diffusion, derive(&p2, &c).diffusion);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(0.0, 123.0), 0.0);
        assert_eq!(tau(2e-4, 1.0), 2e-4);
        assert!(rel(tau(2e-4, 1e10), 2e6) < 1e-15);
    }

    #[test]
    fn gamma_estimate_order_of_magnitude() {
        let vac = VacuumParams::beam_pipe();
        let mu = viscosity(&vac);
        let g = estimate_gamma(&vac, 1.8e-25);
        assert!((1e-15..1e-13).contains(&mu), "mu = {mu}");
        assert!((1e9..1e11).contains(&g), "gamma = {g}");
        assert!(rel(mu, 3.149e-14) < 1e-3, "mu = {mu}");
        assert!(rel(g, 8.747e10) < 1e-3, "gamma = {g}");
    }

    #[test]
    fn gamma_estimate_linear_in_density() {
        let vac = VacuumParams::beam_pipe();
        let g1 = estimate_gamma(&vac, 1.8e-25);
        let vac2 = VacuumParams {
            number_density: 3.0 * vac.number_density,
            ..vac
        };
        assert!(rel(estimate_gamma(&vac2, 1.8e-25), 3.0 * g1) < 1e-15);
        let thin = VacuumParams {
            number_density: 1e-300,
            ..vac
        };
        assert!(estimate_gamma(&thin, 1.8e-25) < 1e-280);
    }

    #[test]
    fn spin_normalization_is_idempotent() {
        let s = SpinState::new(Complex64::new(3.0, 1.0), Complex64::new(0.0, -2.0)).unwrap();
        assert!((s.weight_up() + s.weight_down() - 1.0).abs() < 1e-12);
        let again = SpinState::new(s.a(), s.b()).unwrap();
        assert!((again.a() - s.a()).norm() < 1e-15);
        assert!((again.b() - s.b()).norm() < 1e-15);
        assert!(SpinState::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn invalid_params_rejected() {
        let p = ExperimentParams::silver_sg();
        assert!(p.with_mass(0.0).is_err());
        assert!(p.with_sigma(-1.0).is_err());
        assert!(p.with_gamma(-1.0).is_err());
        assert!(p.with_temperature(f64::NAN).is_err());
        assert!(PhysicalConstants::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn config_falls_back_to_preset() {
        let s = Scenario::from_json_str("{}").unwrap();
        assert_eq!(s, Scenario::silver_sg());
        let s = Scenario::from_json_str(r#"{"gamma_per_s": 1e3, "T_K": 77}"#).unwrap();
        assert_eq!(s.gamma(), 1e3);
        assert_eq!(s.params().temperature(), 77.0);
        assert_eq!(s.params().mass(), 1.8e-25);
        assert!(Scenario::from_json_str(r#"{"gama_per_s": 1}"#).is_err());
    }

    #[test]
    fn config_round_trip() {
        let s = Scenario::silver_sg().with_gamma(42.0).unwrap();
        let text = serde_json::to_string(&s.to_config()).unwrap();
        assert_eq!(Scenario::from_json_str(&text).unwrap(), s);
    }

    #[test]
    fn flight_time_is_point_four_ms() {
        assert!(rel(Scenario::silver_sg().flight_time(), 4e-4) < 1e-15);
    }

    #[test]
    fn width_ratio_is_gamma_independent() {
        let s = Scenario::silver_sg();
        let direct = |s: &Scenario| {
            2.0 * s.diffusion() * s.params().sigma().powi(2) / (s.gamma() * s.hbar().powi(2))
        };
        for g in [1.0, 1e3, 1e10] {
            let sg = s.with_gamma(g).unwrap();
            assert!(rel(direct(&sg), s.width_ratio()) < 1e-12);
        }
        // ~2.7e13 for silver
        assert!(s.width_ratio() > 1e13 / 3.0 && s.width_ratio() < 3e13);
    }
}
