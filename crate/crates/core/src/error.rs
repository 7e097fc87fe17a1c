use serde::Serialize;
use thiserror::Error;

/// Errors raised by the moment-closure toolkit.
///
/// Variants fall into two groups: validation errors (bad inputs, violated
/// preconditions) and numerical failures (the problem is well posed but the
/// computation could not produce an answer). [`Error::is_numerical`] tells
/// them apart; the CLI maps them to exit codes 2 and 3.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integrand is not finite at node {node}")]
    NonFiniteIntegrand { node: usize },

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("partition function evaluated outside its domain (chi = {chi})")]
    DomainError { chi: f64 },

    #[error("basis is not admissible for the nonlinear closure: {0}")]
    AdmissibilityViolation(String),

    #[error("moments are not realizable by the closure: {reason}")]
    NotRealizable {
        reason: String,
        iterations: usize,
        residual: f64,
        multiplier_norm: f64,
        a_n: f64,
    },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("linear system is singular: {0}")]
    SingularLinearSystem(String),

    #[error("value out of admissible bounds: {0}")]
    OutOfBounds(String),

    #[error("system is not hyperbolic: {0}")]
    NotHyperbolic(String),

    #[error("regime {regime} is not valid here: {reason}")]
    RegimeMismatch { regime: String, reason: String },

    #[error("series does not converge: {0}")]
    SeriesDivergence(String),

    #[error("momentum is off the mass shell (p.p = {norm}, expected {expected})")]
    OffMassShell { norm: f64, expected: f64 },

    #[error("singular denominator in closure coefficient {name} (determinant {value:e})")]
    SingularDenominator { name: String, value: f64 },

    #[error("state violates constraint: {0}")]
    StateConstraintViolation(String),

    #[error("realizability lost in cell {cell} at t = {time}: {reason}")]
    RealizabilityLoss { cell: usize, time: f64, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::NonFiniteIntegrand { .. } => "NonFiniteIntegrand",
            Error::DegenerateState(_) => "DegenerateState",
            Error::DomainError { .. } => "DomainError",
            Error::AdmissibilityViolation(_) => "AdmissibilityViolation",
            Error::NotRealizable { .. } => "NotRealizable",
            Error::MaxIterations { .. } => "MaxIterations",
            Error::NotPositiveDefinite(_) => "NotPositiveDefinite",
            Error::SingularLinearSystem(_) => "SingularLinearSystem",
            Error::OutOfBounds(_) => "OutOfBounds",
            Error::NotHyperbolic(_) => "NotHyperbolic",
            Error::RegimeMismatch { .. } => "RegimeMismatch",
            Error::SeriesDivergence(_) => "SeriesDivergence",
            Error::OffMassShell { .. } => "OffMassShell",
            Error::SingularDenominator { .. } => "SingularDenominator",
            Error::StateConstraintViolation(_) => "StateConstraintViolation",
            Error::RealizabilityLoss { .. } => "RealizabilityLoss",
            Error::Io(_) => "Io",
        }
    }

    /// True for failures of the numerics on an otherwise valid request.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFiniteIntegrand { .. }
                | Error::DomainError { .. }
                | Error::NotRealizable { .. }
                | Error::MaxIterations { .. }
                | Error::SingularLinearSystem(_)
                | Error::NotHyperbolic(_)
                | Error::SeriesDivergence(_)
                | Error::SingularDenominator { .. }
                | Error::RealizabilityLoss { .. }
        )
    }

    pub fn report(&self) -> ErrorReport {
        ErrorReport {
            error: self.kind().to_string(),
            message: self.to_string(),
        }
    }
}

/// JSON shape of an error written to stderr by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub error: String,
    pub message: String,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(format!("json: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
