use thiserror::Error;

/// Errors raised anywhere in the lab.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("state is not normalized (|<psi|psi> - 1| = {0:e})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("{context} is negative beyond rounding: {value:e}")]
    NegativeBeyondRounding { context: &'static str, value: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("closed-form and numeric {pair} concurrence disagree: {closed} vs {numeric}")]
    OracleMismatch {
        pair: &'static str,
        closed: f64,
        numeric: f64,
    },

    #[error("operation not supported for family {0}")]
    UnsupportedFamily(String),

    #[error("unknown case preset '{0}'")]
    UnknownCase(String),

    #[error("no sign change of the score along the scanned axis")]
    NoSignChange,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
