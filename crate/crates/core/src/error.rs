use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dag| = {0:e})")]
    NonHermitian(f64),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("subsystem index {index} out of range for {count} subsystems")]
    BadIndex { index: usize, count: usize },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("argument outside domain: {0}")]
    DomainError(String),

    #[error("invalid parameters: {0}")]
    BadSpec(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("no output representation registered for this channel")]
    NoOutputRep,

    #[error("channel is not covariant (residual {0:e})")]
    NotCovariant(f64),

    #[error("support condition violated: {0}")]
    SupportViolation(String),

    #[error("no convergence after {iterations} iterations (best value {best_value}, gap {final_gap:e})")]
    NoConvergence {
        iterations: usize,
        best_value: f64,
        final_gap: f64,
    },

    #[error("covariance matrix is not bona fide (symplectic eigenvalue {0})")]
    NotBonaFide(f64),

    #[error("json: {0}")]
    Json(String),

    #[error("at q = {q}: {source}")]
    AtParameter { q: f64, source: Box<Error> },
}

impl Error {
    /// The underlying error, looking through parameter annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtParameter { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
