use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("generator index {index} out of range for n = {n} ({count} generators)")]
    GeneratorOutOfRange { index: usize, n: usize, count: usize },

    #[error("spatial dimension must be positive")]
    ZeroDimension,

    #[error("signature mismatch: n = {left} vs n = {right}")]
    SignatureMismatch { left: usize, right: usize },

    #[error("invalid lattice: {0}")]
    InvalidGrid(String),

    #[error("lattice mismatch between fields")]
    GridMismatch,

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("time step must be positive and finite, got {0}")]
    InvalidTau(f64),

    #[error(
        "CFL violation: tau = {tau} exceeds {max_tau} (need d_h(xi)^2 * tau^2 <= 2(sqrt(2)-1) at every dual point)"
    )]
    Cfl { tau: f64, max_tau: f64 },

    #[error("t / tau = {0} is not a nonnegative integer")]
    NonIntegerTime(f64),

    #[error("Chebyshev degree {0} below the supported range")]
    NegativeDegree(i64),

    #[error("principal value requires |lambda| < 1, got {0}")]
    PoleOutsideInterval(f64),

    #[error("quadrature node count {0} must be even and at least 8")]
    BadNodeCount(usize),

    #[error("quadrature not converged: estimates {coarse} and {fine} disagree")]
    QuadratureNotConverged { coarse: f64, fine: f64 },

    #[error("Mittag-Leffler parameters must be positive (alpha = {alpha}, beta = {beta})")]
    InvalidMlParams { alpha: f64, beta: f64 },

    #[error("Mittag-Leffler series did not converge within {terms} terms at z = {z}")]
    SeriesNotConverged { z: f64, terms: usize },

    #[error("outside the Laplace convergence region: lambda^2 = {lambda2}, |s|^(1/alpha) = {bound}")]
    OutsideConvergenceRegion { lambda2: f64, bound: f64 },

    #[error("resolvent pole hit: cos(omega tau) - lambda = {0:e}")]
    PoleHit(f64),

    #[error("multiplier lambda is not real at this dual point (CFL bound exceeded)")]
    ComplexLambda,

    #[error("invalid initial datum: {0}")]
    InvalidDatum(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
