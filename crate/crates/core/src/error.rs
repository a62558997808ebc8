use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by every module of the crate.
///
/// Variants carry enough context (index, offending factor) for the CLI to
/// print a one-line diagnostic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse {0:?} as a rational (expected \"p\" or \"p/q\")")]
    ParseRational(String),

    #[error("non-finite floating-point value in {0}")]
    NonFinite(&'static str),

    #[error("pole in parameters at index {index}: factor `{factor}` vanishes")]
    PoleInParameters { index: usize, factor: String },

    #[error("degenerate reflection parameter: |a_{index}| = 1")]
    DegenerateReflection { index: usize },

    #[error("Christoffel transform undefined: A_{index} = 0 (P_{next}(theta) = 0)", next = .index + 1)]
    ZeroAtTheta { index: usize },

    #[error("supplied square root {root} does not square to {value}")]
    NotAPerfectSquare { value: String, root: String },

    #[error("supplied square root is zero")]
    ZeroSqrt,

    #[error("inconsistent theta: recurrence carries {found}, chi^2 + alpha - c^2 = {expected}")]
    InconsistentTheta { expected: String, found: String },

    #[error("reflection recursion breaks down at index {index}: 1 + a_{prev} = 0", prev = .index - 1)]
    DegenerateRecursion { index: usize },

    #[error("identity `{identity}` violated at index {index}")]
    IdentityViolation { identity: String, index: usize },

    #[error("matrix is not positive definite (pivot {index} is not positive)")]
    NotPositiveDefinite { index: usize },

    #[error("singular pivot at index {index} in LU factorization")]
    SingularPivot { index: usize },

    #[error("no dressing-chain solution found (best residual {best_residual:e})")]
    NoSolution { best_residual: f64 },

    #[error("need {needed} coefficients, only {available} available")]
    InsufficientData { needed: usize, available: usize },

    #[error("invalid dimension {requested}: {reason}")]
    InvalidDimension { requested: usize, reason: &'static str },

    #[error("recurrence has no AC-form (A, C, theta) attached")]
    MissingAcForm,
}

impl Error {
    pub(crate) fn pole(index: usize, factor: impl Into<String>) -> Self {
        Error::PoleInParameters {
            index,
            factor: factor.into(),
        }
    }
}
