//! Error types shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while validating inputs or running the
/// classification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector or matrix has the wrong shape for the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A metric failed symmetry or non-degeneracy validation.
    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    /// A candidate (J, g) pair satisfies neither J^2 = +I nor J^2 = -I, or
    /// J^t g J is not +/- g within tolerance. Carries both residuals.
    #[error("not a compatible structure: {0}")]
    NotAStructure(String),

    /// The induced Gram matrix of a tangent frame is (numerically) singular,
    /// so tangential projection is undefined at this point.
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),

    /// Expression text failed to parse.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// An identifier in an expression is not a declared variable, constant,
    /// or known function.
    #[error("unknown name `{name}` at byte {offset}")]
    UnknownName { name: String, offset: usize },

    /// Evaluation hit a real-domain violation (log of a non-positive value,
    /// square root of a negative value, division by zero).
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter point lies outside the immersion's declared domain box.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// Too many sample points had degenerate frames for a classification to
    /// be meaningful.
    #[error("degenerate sampling: {0}")]
    AllSamplesDegenerate(String),

    /// Every sample of a curve had a light-like (or vanishing) tangent.
    #[error("all samples light-like")]
    AllSamplesLightLike,

    /// A requested tolerance is below what f64 arithmetic can resolve.
    #[error("tolerance conflict: {0}")]
    ToleranceConflict(String),

    /// Sweep was asked to vary a constant the entry does not declare.
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    /// Registry lookup failed.
    #[error("unknown registry entry `{0}`")]
    UnknownRegistryEntry(String),

    /// Gallery lookup failed.
    #[error("unknown gallery entry `{0}`")]
    UnknownGalleryEntry(String),

    /// A JSON document is structurally valid but violates a schema rule.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
