//! Spin-matrix Wigner function of a Stern-Gerlach beam in a Caldeira-Leggett
//! environment: closed forms, marginals, a finite-difference reference
//! solver, coherence analysis and grid export.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closedform;
pub mod coherence;
pub mod error;
pub mod grid;
pub mod marginals;
pub mod params;
pub mod pde;
pub mod quadrature;
pub mod series;

pub use closedform::{
    diag_kernel, initial_wigner, offdiag_coeffs, w_diag, w_offdiag, wigner_matrix, DiagKernel,
    DiagState, OffDiagCoeffs, OffDiagState, WignerAt, WignerMatrixSample,
};
pub use coherence::{
    coherence_curve, decoherence_time, decoherence_time_auto, delta, fit_power_law, log_delta,
    scan_and_fit, CoherenceCurve, DecoherencePoint, DeltaMethod, DeltaOptions, PowerLawFit,
    ScanResult,
};
pub use error::{Error, Result};
pub use grid::{auto_window, local_maxima, sample, ExportFormat, FieldKind, Peak, PhaseSpaceGrid, WignerField};
pub use marginals::{moments, Branch, GaussianMoments, Regime, RegimeReport};
pub use params::{
    derive, estimate_gamma, tau, DerivedParams, ExperimentParams, PhysicalConstants, Scenario,
    SpinState, VacuumParams,
};
pub use pde::{evolve_diag, evolve_offdiag, ComplexField, Limiter, PdeConfig, RealField};
