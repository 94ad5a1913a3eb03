use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Variants are grouped by how a caller is expected to react: input
/// problems (`Validation`, `Parse`, `Precondition`, `Domain`), numerical
/// trouble (`NonConvergence`, `ClusterAmbiguity`, `Singular`) and
/// `Internal`, which always signals a bug.
#[derive(Debug, Error)]
pub enum Error {
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("parse error in {what}: {msg}")]
    Parse { what: &'static str, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("argument outside the formula's domain: {0}")]
    Domain(String),

    #[error("representation is not strongly acyclic: {0}")]
    NotAcyclic(String),

    #[error("bundle is not admissible: {0}")]
    NonAdmissible(String),

    #[error("sequence is not exact: {0}")]
    NotExact(String),

    #[error("singular change of basis: {0}")]
    Singular(String),

    #[error("quadrature or finite difference did not converge: {0}")]
    NonConvergence(String),

    #[error("eigenvalue clustering is ambiguous: {0}")]
    ClusterAmbiguity(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(what: &'static str, msg: impl Into<String>) -> Self {
        Error::Parse {
            what,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
