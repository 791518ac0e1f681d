//! Bound states of a spinless relativistic particle in mixed scalar/vector
//! Kratzer potentials.
//!
//! The crate has two independent routes to the spectrum:
//!
//! * [`spectrum`]: the implicit spectrum equation of the separated
//!   (nonrelativistic factor × correction factor) ansatz and its closed-form
//!   special cases, with the analytic ground state in [`wavefunction`];
//! * [`oracle`]: a direct shooting solver for the radial Klein-Gordon equation
//!   that never uses the ansatz coefficients.
//!
//! [`verify`] runs the randomized residual, manifold and limit suites that
//! compare the two.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod quadrature;
pub mod roots;
pub mod spectrum;
pub mod verify;
pub mod wavefunction;

pub use error::{KgError, Result};
pub use model::{AdmissibilityReport, DerivedCoefficients, PotentialParams, Potentials, Verdict};
pub use oracle::{
    deviation_report, eigensolve_near, kg_eigensolve, kg_match_defect, Deviation, GridConfig, MatchDefect,
    RadiusRule, ShootingResult,
};
pub use spectrum::{
    approx_energy, closed_form, nonrel_epsilon, solve_levels, solve_spectrum, spectrum_residual,
    Branch, ClosedForm, ClosedFormCase, EnergyLevel, Method, SeriesCase, SolverConfig,
    SpectrumTable,
};
pub use wavefunction::{
    eval_ground_state, normalization, residual_report, GroundState, GroundStateEval,
    Normalization, QuadConfig, ResidualReport, ResidualSample,
};
