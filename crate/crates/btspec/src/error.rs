use num_complex::Complex64;
use thiserror::Error;

/// Error type shared by every module of the crate.
///
/// Variant names are stable: the CLI echoes [`Error::name`] verbatim in its
/// exit diagnostics, and tests match on them.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The Bergman-type integral diverges: alpha + beta + gamma >= 2(delta - 1).
    #[error("divergent integral: alpha + beta + gamma = {degree_sum} >= 2(delta - 1) = {bound}")]
    DivergentIntegral { degree_sum: i64, bound: i64 },

    /// A symbol term needs a larger quantization degree than requested.
    #[error("degree too small: k = {k} but the symbol requires k >= {required}")]
    DegreeTooSmall { k: u32, required: u32 },

    #[error(
        "quadrature did not converge: last refinement delta {last_delta:.3e} > {tol:.3e} at {nodes} nodes"
    )]
    QuadratureNotConverged {
        last_delta: f64,
        tol: f64,
        nodes: usize,
    },

    /// The matrix couples even and odd basis indices.
    #[error("not parity preserving: shift set contains odd offset {0}")]
    NotParityPreserving(i64),

    #[error("eigenvalue iteration failed to converge")]
    NumericalFailure,

    /// 1 + z*wbar vanishes, so the rational symbol extension has a pole there.
    #[error("pole on locus: |1 + z*wbar| < 1e-14 at z = {z}")]
    PoleOnLocus { z: Complex64 },

    /// The two sheets of the level set collide (vanishing discriminant).
    #[error("branch pinch: level-set sheets collide at z = {z}")]
    BranchPinch { z: Complex64 },

    /// The leading coefficient of the level-set quadratic vanishes.
    #[error("root at infinity: leading level-set coefficient vanishes at z = {z}")]
    RootAtInfinity { z: Complex64 },

    #[error("window violation: {0}")]
    WindowViolation(String),

    #[error("Newton iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("count mismatch: {exact} exact eigenvalues in window but only {approx} approximations")]
    CountMismatch { exact: usize, approx: usize },
}

impl Error {
    /// Stable machine-readable variant name.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::DivergentIntegral { .. } => "DivergentIntegral",
            Error::DegreeTooSmall { .. } => "DegreeTooSmall",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::NotParityPreserving(_) => "NotParityPreserving",
            Error::NumericalFailure => "NumericalFailure",
            Error::PoleOnLocus { .. } => "PoleOnLocus",
            Error::BranchPinch { .. } => "BranchPinch",
            Error::RootAtInfinity { .. } => "RootAtInfinity",
            Error::WindowViolation(_) => "WindowViolation",
            Error::NonConvergence(_) => "NonConvergence",
            Error::CountMismatch { .. } => "CountMismatch",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
