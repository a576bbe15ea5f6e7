use thiserror::Error;

/// Every failure the library reports.
///
/// Validation failures describe bad input; `NoSolution` and
/// `NormalizationFailure` can only come from a broken invariant inside the
/// library and are reported as internal errors by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("expected {expected} generator images, got {got}")]
    WrongGeneratorCount { expected: usize, got: usize },
    #[error("generator image {index} is not a 2x2 matrix")]
    NotTwoByTwo { index: usize },
    #[error("generator image {index} has determinant {det}, expected +1 or -1")]
    NotInvertible { index: usize, det: String },
    #[error("the generator images do not satisfy the surface relator")]
    RelatorNotSatisfied,
    #[error("representation is not symplectic (some determinant is -1)")]
    NotSymplectic,
    #[error("the relator is empty")]
    EmptyRelator,
    #[error("module action is not an involution")]
    NotAnInvolution,
    #[error("relator mismatch: {0}")]
    RelatorMismatch(String),
    #[error("class does not belong to the given surface and representation")]
    ClassContextMismatch,
    #[error("principal bundles induce the trivial representation")]
    NontrivialRho,
    #[error("operation requires the torus as base surface")]
    NotTorus,
    #[error("incompatible fibre-product pair: {0}")]
    IncompatiblePair(String),
    #[error("no lift of the representation exists: {0}")]
    NoSolution(String),
    #[error("normalization failure: {0}")]
    NormalizationFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid job: {0}")]
    InvalidJob(String),
}

impl Error {
    /// Stable machine-readable name used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InvalidSurface(_) => "InvalidSurface",
            Error::WrongGeneratorCount { .. } => "WrongGeneratorCount",
            Error::NotTwoByTwo { .. } => "NotTwoByTwo",
            Error::NotInvertible { .. } => "NotInvertible",
            Error::RelatorNotSatisfied => "RelatorNotSatisfied",
            Error::NotSymplectic => "NotSymplectic",
            Error::EmptyRelator => "EmptyRelator",
            Error::NotAnInvolution => "NotAnInvolution",
            Error::RelatorMismatch(_) => "RelatorMismatch",
            Error::ClassContextMismatch => "ClassContextMismatch",
            Error::NontrivialRho => "NontrivialRho",
            Error::NotTorus => "NotTorus",
            Error::IncompatiblePair(_) => "IncompatiblePair",
            Error::NoSolution(_) => "NoSolution",
            Error::NormalizationFailure(_) => "NormalizationFailure",
            Error::Parse(_) => "Parse",
            Error::InvalidJob(_) => "InvalidJob",
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::NoSolution(_) | Error::NormalizationFailure(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
