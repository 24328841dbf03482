//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong when building or checking a structure.
///
/// Witness data (index tuples, defect values) is carried in the variants so
/// that a failed check can be traced back to a concrete basis computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("duplicate bracket entry for pair ({i},{j})")]
    DuplicateEntry { i: usize, j: usize },

    #[error("bracket entries must have i < j, got ({i},{j})")]
    NotUpperTriangular { i: usize, j: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("form of degree {degree} applied to {got} vectors")]
    ArityMismatch { degree: usize, got: usize },

    #[error("interior product needs degree >= 1")]
    DegreeZero,

    #[error("expected a form of degree {expected}, got degree {got}")]
    WrongDegree { expected: usize, got: usize },

    #[error("the given basis is linearly dependent")]
    LinearlyDependentBasis,

    #[error("span is not closed under the bracket: [b{i},b{j}] leaves the span")]
    NotASubalgebra { i: usize, j: usize },

    #[error("eta ^ omega^n vanishes, the pair is not almost cosymplectic")]
    NotVolume,

    #[error("operation requires odd dimension, got {dim}")]
    EvenDimension { dim: usize },

    #[error("operation requires even dimension, got {dim}")]
    OddDimension { dim: usize },

    #[error("Reeb system is singular; the pair was not validated")]
    SingularSystem,

    #[error("(h, omega) is not symplectic: {reason}")]
    NotSymplectic { reason: String },

    #[error("not an almost contact metric structure: {identity} fails at {witness}")]
    NotAcm { identity: String, witness: String },

    #[error("the supplied endomorphism is not a derivation (fails on pair ({i},{j}))")]
    NotADerivation { i: usize, j: usize },

    #[error("the 2-form is degenerate")]
    NotNondegenerate,

    #[error("d(eta) != 0: witness d(eta)(e{i},e{j}) = {value}")]
    EtaNotClosed { i: usize, j: usize, value: String },

    #[error("(J, metric) is not almost Kaehler: {reason}")]
    NotAlmostKahler { reason: String },

    #[error("no rational alpha makes D + alpha*I an infinitesimal symplectic transformation")]
    NoValidAlpha,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("unknown catalog entry '{0}'")]
    UnknownEntry(String),

    #[error("inadmissible parameters for '{entry}': {reason}")]
    InadmissibleParams { entry: String, reason: String },

    #[error("external structure-constant data is missing: {0}")]
    MissingExternalData(String),

    #[error("polarization failed numerically: {0}")]
    NumericalFailure(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("cannot parse rational '{0}'")]
    BadRational(String),

    #[error("malformed input: {0}")]
    BadInput(String),
}
