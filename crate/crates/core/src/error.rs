use thiserror::Error;

/// Errors raised by the numerical and group-theoretic routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("vector norm {norm:e} is below the projective threshold")]
    ZeroVector { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("matrix is numerically singular (sigma_min / sigma_max = {ratio:e})")]
    SingularInput { ratio: f64 },

    #[error("no singular gap at index {p} (ratio {ratio})")]
    NoGap { p: usize, ratio: f64 },

    #[error("element is the identity")]
    IdentityElement,

    #[error("word count {count} exceeds the budget of {cap}")]
    BudgetExceeded { count: u128, cap: u64 },

    #[error("no loxodromic word of length <= {lmax}")]
    NoLoxodromicFound { lmax: usize },

    #[error("input is not exactly representable over the Gaussian rationals: {0}")]
    NonRationalInput(String),

    #[error("points {i} and {j} coincide (chordal distance {distance:e})")]
    DuplicatePoints { i: usize, j: usize, distance: f64 },

    #[error("empty sequence")]
    EmptySequence,

    #[error("sequence has {len} terms, at least {min} required")]
    SequenceTooShort { len: usize, min: usize },

    #[error("sequence did not converge (residual {residual:e})")]
    NotConverged { residual: f64 },

    #[error("limit is invertible, not a quasi-projective map")]
    NotQuasiProjective,

    #[error("sequence type inconclusive: image-kernel distance {distance:e}")]
    Inconclusive { distance: f64 },

    #[error("sequence is not divergent (sigma_1 of last term = {sigma1})")]
    NotDivergent { sigma1: f64 },

    #[error("flag routes disagree at step {step}: distance {distance:e}")]
    RouteDisagreement { step: usize, distance: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake-case name of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroVector { .. } => "zero_vector",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NumericalFailure(_) => "numerical_failure",
            Error::SingularInput { .. } => "singular_input",
            Error::NoGap { .. } => "no_gap",
            Error::IdentityElement => "identity_element",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NoLoxodromicFound { .. } => "no_loxodromic_found",
            Error::NonRationalInput(_) => "non_rational_input",
            Error::DuplicatePoints { .. } => "duplicate_points",
            Error::EmptySequence => "empty_sequence",
            Error::SequenceTooShort { .. } => "sequence_too_short",
            Error::NotConverged { .. } => "not_converged",
            Error::NotQuasiProjective => "not_quasi_projective",
            Error::Inconclusive { .. } => "inconclusive",
            Error::NotDivergent { .. } => "not_divergent",
            Error::RouteDisagreement { .. } => "route_disagreement",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::UnknownGenerator(_) => "unknown_generator",
            Error::Parse { .. } => "parse",
        }
    }
}
