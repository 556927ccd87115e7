use thiserror::Error;

/// Errors raised by the Fock-space numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "truncation overflow: dropped probability {dropped:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    TruncationOverflow { dropped: f64, tolerance: f64 },

    #[error("cutoff {cutoff} too small for |amplitude|^2 = {amplitude_sq:.4} (limit {limit:.4})")]
    CutoffTooSmall {
        cutoff: usize,
        amplitude_sq: f64,
        limit: f64,
    },

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error(
        "convergence failure: value moved by {shift:.3e} on refinement (tolerance {tolerance:.3e})"
    )]
    ConvergenceFailure { shift: f64, tolerance: f64 },

    #[error("quadrature not converged: node doubling moved the result by {shift:.3e} (tolerance {tolerance:.3e})")]
    QuadratureNotConverged { shift: f64, tolerance: f64 },

    #[error("no sign change on bracket [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
