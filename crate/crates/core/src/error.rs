use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mixing measures have different support sizes ({left} vs {right})")]
    MismatchedSupportSize { left: usize, right: usize },

    #[error("invalid mixing measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("natural-parameter midpoint lies outside the domain")]
    MidpointOutsideDomain,

    #[error("quadrature did not converge after {intervals} intervals (error estimate {error:e})")]
    QuadratureNonConvergence { intervals: usize, error: f64 },

    #[error("density is not differentiable at x = {x}")]
    NonDifferentiablePoint { x: f64 },

    #[error("xi = {0} is a degenerate value for the moment map")]
    DegenerateXi(f64),

    #[error("sequence length {got} does not match model length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("root bracketing failed: {0}")]
    RootBracketingFailed(String),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("perturbation path leaves the parameter space: {0}")]
    InvalidPath(String),

    #[error("no proposal accepted in the last {window} iterations")]
    AllProposalsRejected { window: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable tag used in run envelopes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MismatchedSupportSize { .. } => "MismatchedSupportSize",
            Error::InvalidMeasure(_) => "InvalidMeasure",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::MidpointOutsideDomain => "MidpointOutsideDomain",
            Error::QuadratureNonConvergence { .. } => "QuadratureNonConvergence",
            Error::NonDifferentiablePoint { .. } => "NonDifferentiablePoint",
            Error::DegenerateXi(_) => "DegenerateXi",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::RootBracketingFailed(_) => "RootBracketingFailed",
            Error::InvalidDirection(_) => "InvalidDirection",
            Error::InvalidPath(_) => "InvalidPath",
            Error::AllProposalsRejected { .. } => "AllProposalsRejected",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Schema { .. } => "SchemaError",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
