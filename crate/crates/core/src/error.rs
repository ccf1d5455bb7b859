use crate::scalar::Mode;

/// Errors shared across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("arithmetic mode mismatch: {0} vs {1}")]
    ModeMismatch(Mode, Mode),

    #[error("requested order {requested} exceeds available order {available}")]
    OrderExceeded { requested: usize, available: usize },

    #[error("leading coefficient is zero; series is not invertible")]
    ZeroLeadingCoefficient,

    #[error("coefficient a_{index} is not positive")]
    NonPositiveCoefficient { index: usize },

    #[error("evaluation point lies outside the open unit disk (|w| = {modulus})")]
    OutsideDisk { modulus: f64 },

    #[error("coefficient matrix is not Hermitian at ({row}, {col})")]
    NonHermitian { row: usize, col: usize },

    #[error("kernel coefficient matrix is indefinite (eigenvalue estimate {witness})")]
    IndefiniteKernel { witness: f64 },

    #[error("exact arithmetic unavailable: {0}")]
    ExactUnsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("power iteration did not converge after {iterations} iterations")]
    PowerIterationDiverged { iterations: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("malformed scalar literal {0:?}")]
    MalformedScalar(String),

    #[error("kernel JSON schema violation: {0}")]
    KernelSchema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
