use thiserror::Error;

/// Errors produced by the library and the batch runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-Hermitian Fourier coefficients at index {index:?} (mismatch {mismatch:e})")]
    NonHermitianCoefficients { index: Vec<i64>, mismatch: f64 },

    #[error("symbol takes negative values (grid minimum {min})")]
    NegativeSymbol { min: f64 },

    #[error("displacement site {site:?} lies outside the nonnegative orthant")]
    SiteOutsideOrthant { site: Vec<i64> },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("kappa mismatch: {0} vs {1}")]
    KappaMismatch(f64, f64),

    #[error("size overflow: {size} exceeds the configured cap {cap}")]
    SizeOverflow { size: usize, cap: usize },

    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("not trace class: largest eigenvalue of W is {max_eigenvalue}")]
    NotTraceClass { max_eigenvalue: f64 },

    #[error("the two hypotheses carry different displacements")]
    DisplacementMismatch,

    #[error("both symbols must be strictly positive")]
    StrictPositivityRequired,

    #[error("negative parameter r = {0}")]
    NegativeParameter(f64),

    #[error("parameter {value} outside the admissible range [0, {upper})")]
    ParameterOutOfRange { value: f64, upper: f64 },

    #[error("integrand is not finite at node {node:?}")]
    NonFiniteIntegrand { node: Vec<f64> },

    #[error("spectral radius {0} is not below 1")]
    SpectralRadiusError(f64),

    #[error("displacement operator truncation defect {0:e} exceeds 1e-6")]
    UnitarityDefect(f64),

    #[error("states live on different Fock bases")]
    BasisMismatch,

    #[error("parse error at line {line}, column {column} ({path}): {message}")]
    Parse {
        line: usize,
        column: usize,
        path: String,
        message: String,
    },

    #[error("validation error in field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::DomainError(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Short stable name of the variant, used in reports and on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::NonHermitianCoefficients { .. } => "NonHermitianCoefficients",
            Error::NegativeSymbol { .. } => "NegativeSymbol",
            Error::SiteOutsideOrthant { .. } => "SiteOutsideOrthant",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::KappaMismatch(..) => "KappaMismatch",
            Error::SizeOverflow { .. } => "SizeOverflow",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::DomainError(_) => "DomainError",
            Error::NotTraceClass { .. } => "NotTraceClass",
            Error::DisplacementMismatch => "DisplacementMismatch",
            Error::StrictPositivityRequired => "StrictPositivityRequired",
            Error::NegativeParameter(_) => "NegativeParameter",
            Error::ParameterOutOfRange { .. } => "ParameterOutOfRange",
            Error::NonFiniteIntegrand { .. } => "NonFiniteIntegrand",
            Error::SpectralRadiusError(_) => "SpectralRadiusError",
            Error::UnitarityDefect(_) => "UnitarityDefect",
            Error::BasisMismatch => "BasisMismatch",
            Error::Parse { .. } => "ParseError",
            Error::Validation { .. } => "ValidationError",
            Error::Io(_) => "IoError",
        }
    }

    /// Process exit code: 1 for configuration problems, 2 for numerical failures.
    ///
    /// Verification failures (code 3) are not errors; the runner reports them separately.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Validation { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
