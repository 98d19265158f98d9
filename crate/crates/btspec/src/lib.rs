//! Exact spectra and complex Bohr-Sommerfeld approximations for
//! Berezin-Toeplitz operators on the sphere.
//!
//! The quantum space at degree k is the span of an orthonormal basis
//! `e_0..e_k` of weighted monomials in the stereographic chart; rational
//! symbols quantize to dense `(k+1) x (k+1)` matrices with closed-form
//! entries ([`toeplitz`]). The crate computes their full complex spectra
//! ([`spectra`]), evaluates the complexified action over cycles in the level
//! sets of the perturbed height symbol `x3 + i*eps*x1^2` ([`action`]), solves
//! the principal and half-form quantization conditions by Newton continuation
//! ([`bohr_sommerfeld`]), and quantifies how well those solutions track the
//! true eigenvalues as the degree grows ([`compare`]).
//!
//! Everything is deterministic: quadratures refine on fixed schedules,
//! parallel sweeps sort their results canonically, and the one randomized
//! ingredient (the generic rotation inside the eigensolver) uses a hard-coded
//! seed.

pub mod action;
mod assignment;
pub mod bohr_sommerfeld;
pub mod compare;
mod eigen;
pub mod error;
pub mod spectra;
mod svd;
pub mod symbol;
pub mod toeplitz;

pub use action::{
    action_derivative, action_integral, level_residual, wbar_plus, ActionOptions, ActionResult,
    LevelQuadratic, DEFAULT_QUAD_TOL,
};
pub use bohr_sommerfeld::{bs_solve, bs_spectrum, BsSolution, BsSpectrum, Variant};
pub use compare::{
    compare_operator, convergence_slope, convergence_study, match_spectra, ComparisonReport,
    ConvergenceStudy, MatchStats, MatchedPair,
};
pub use error::{Error, Result};
pub use spectra::{eigenvalues, eigenvalues_of, parity_blocks, power_norm, resolvent_norm, Spectrum};
pub use symbol::{StandardSymbol, SymbolExpr, SymbolTerm};
pub use toeplitz::{
    closed_form_integral, operator_matrix, toeplitz_matrix, toeplitz_quadrature_oracle,
    OperatorFamily, ToeplitzMatrix,
};
