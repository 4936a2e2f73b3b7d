use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// The variants are grouped so the command-line front end can map them onto
/// stable exit codes (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Equation or wave parameters violate a structural invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The (a, b, g) sign pattern does not admit the requested family.
    #[error("{family}: sign condition {condition} violated")]
    SignCondition {
        family: &'static str,
        condition: &'static str,
    },

    /// The free power lies outside the weak-existence interval of a family.
    #[error("{family}: {var}={value} outside the weak existence range {interval}")]
    OutOfRange {
        family: &'static str,
        var: &'static str,
        value: f64,
        interval: String,
    },

    /// The numerical procedure cannot be applied to these parameters
    /// (sign incompatibility, failed concavity test, g = 0, ...).
    #[error("procedure rejected: {0}")]
    Rejected(String),

    /// The half-width integral or the shooting trajectory does not close up.
    #[error("non-compact travelling wave: {0}")]
    NonCompact(String),

    /// Adaptive quadrature failed to reach its tolerance.
    #[error("quadrature did not converge (error estimate {estimate:.3e})")]
    Quadrature { estimate: f64 },

    /// Something that should be impossible given validated inputs.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Exit code used by the `compacton` binary.
    ///
    /// 2 marks bad input, 3 a rejection by one of the procedures. Verification
    /// failures (4) are not errors and are decided by the caller.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::InvalidParams(_)
            | Error::SignCondition { .. }
            | Error::OutOfRange { .. } => 2,
            Error::Rejected(_) | Error::NonCompact(_) => 3,
            Error::Quadrature { .. } | Error::Internal(_) => 1,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
