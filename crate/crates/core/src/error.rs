use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// The closed forms are written in the variable tau = gamma * t and
    /// are not evaluated at gamma = 0.
    #[error("damping rate is zero; closed-form solution requires gamma > 0")]
    GammaZero,

    #[error("degenerate off-diagonal quadratic form (discriminant {discriminant:e} at tau = {tau:e})")]
    DegenerateQuadratic { tau: f64, discriminant: f64 },

    #[error("real part of the off-diagonal exponent is not negative definite (det = {det:e})")]
    NotPositiveDefinite { det: f64 },

    #[error("ODE step too large: gamma * dt = {gamma_dt:e} exceeds 0.1")]
    StepTooLarge { gamma_dt: f64 },

    #[error("CFL violated along {axis}: courant number {courant:.4} > {limit}")]
    CflViolation {
        axis: &'static str,
        courant: f64,
        limit: f64,
    },

    #[error("phase rotation under-resolved: {phase_per_step:.4} rad per step > 0.1")]
    PhaseUnderResolved { phase_per_step: f64 },

    #[error("non-finite value in field after step {step}")]
    NonFiniteField { step: usize },

    #[error("boundary leak: {fraction:e} of the mass sits on the outer band at step {step}")]
    BoundaryLeak { step: usize, fraction: f64 },

    #[error(
        "invalid bracket: delta({t_lo:e}) = {delta_lo:e}, delta({t_hi:e}) = {delta_hi:e}; need delta(t_lo) > 1/e > delta(t_hi)"
    )]
    BracketInvalid {
        t_lo: f64,
        t_hi: f64,
        delta_lo: f64,
        delta_hi: f64,
    },

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o failure on {path}: {source}")]
    IoFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short stable name used by the CLI when reporting numerical failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "InvalidParams",
            Error::GammaZero => "GammaZero",
            Error::DegenerateQuadratic { .. } => "DegenerateQuadratic",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::CflViolation { .. } => "CflViolation",
            Error::PhaseUnderResolved { .. } => "PhaseUnderResolved",
            Error::NonFiniteField { .. } => "NonFiniteField",
            Error::BoundaryLeak { .. } => "BoundaryLeak",
            Error::BracketInvalid { .. } => "BracketInvalid",
            Error::InsufficientData(_) => "InsufficientData",
            Error::Parse(_) => "Parse",
            Error::IoFailure { .. } => "IoFailure",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::IoFailure {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
