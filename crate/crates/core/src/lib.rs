//! Verification toolkit for holonomic two-qubit control with squeezed
//! coherent states.
//!
//! The crate evaluates the closed-form Wilczek-Zee connection, curvature,
//! covariant-derivative and bracket matrices of the squeezed/displaced
//! oscillator model, re-derives them independently (finite differences of the
//! connection, and a truncated Fock-space computation from the squeezing and
//! displacement operators), integrates parallel transport around loops in the
//! 12-dimensional control space, and certifies that the control set spans
//! `u(4)`.
//!
//! Modules:
//! - [`lie_core`]: dense complex matrices, brackets, spans, closure, exp/log.
//! - [`model`]: parameters, closed forms, numeric re-derivation, conventions.
//! - [`holonomy`]: loops, path-ordered transport, small-loop curvature.
//! - [`fock_oracle`]: truncated Fock spaces and the numeric connection.
//! - [`cli`]: the `hqc` command-line front end and its reports.

pub mod cli;
pub mod fock_oracle;
pub mod holonomy;
pub mod lie_core;
pub mod model;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),

    #[error("non-finite values in {0}")]
    NonFinite(String),

    #[error("singular matrix in {0}")]
    Singular(String),

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),

    #[error("||U - Id|| = {0:.4} >= 1: principal logarithm not defined here; shrink the loop")]
    LogOutOfRange(f64),

    #[error("generator {index} is not anti-Hermitian (defect {defect:.3e})")]
    NotAntiHermitian { index: usize, defect: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid parameter point: {0}")]
    InvalidPoint(String),

    #[error("coordinates {0} and {1} belong to different subsystems; the connection has no mixed components")]
    MixedSubsystem(String, String),

    #[error("unknown label: {0}")]
    UnknownLabel(String),

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("unitarity defect {defect:.3e} exceeds {limit:.1e}; increase steps per segment (used {steps})")]
    UnitarityDefect { defect: f64, limit: f64, steps: usize },

    #[error("Fock cutoff {cutoff} not converged: result moved by {shift:.3e} (> {tol:.1e}) at cutoff {next}")]
    CutoffNotConverged {
        cutoff: usize,
        next: usize,
        shift: f64,
        tol: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
