use thiserror::Error;

/// Errors produced by the library.
///
/// Domain errors indicate an input outside an operation's contract (division
/// by zero, a non-monic modulus, an out-of-range exponent, ...). Internal
/// errors indicate an inconsistency detected at runtime and always name the
/// offending modulus or parameter.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A paper-mode mollifier schedule whose index set is empty at the given
    /// size parameters. Expected for desk-scale sizes.
    #[error("degenerate schedule: {0}")]
    DegenerateSchedule(String),

    /// Root finding did not converge; names the modulus.
    #[error("root finding failed for modulus {modulus}: {detail}")]
    NonConvergence { modulus: String, detail: String },

    /// Internally inconsistent data (e.g. point counts violating the
    /// Hasse–Weil window); names the offending modulus.
    #[error("internal inconsistency for {context}: {detail}")]
    Inconsistent { context: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
