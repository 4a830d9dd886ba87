use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid generator token `{0}`")]
    InvalidGenerator(String),
    #[error("integer overflow while composing mapping-class matrices")]
    Overflow,
    #[error("matrix [[{0}, {1}], [{2}, {3}]] has determinant {4}, expected ±1")]
    NotUnimodular(i64, i64, i64, i64, i64),

    #[error("unknown anyon model `{0}`")]
    UnknownModel(String),
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown anyon label `{0}`")]
    UnknownLabel(String),
    #[error("reflection is not representable for model `{model}`: {reason}")]
    UnsupportedReflection { model: String, reason: String },
    #[error("inconsistent modular data: {0}")]
    InconsistentData(String),

    #[error("unknown protocol `{0}`")]
    UnknownProtocol(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("protocol does not close: {0}")]
    NotClosed(String),
    #[error("rewrite budget of {budget} exhausted; stuck path: {path}")]
    RewriteBudget { budget: usize, path: String },
    #[error("steps act on regions, so the product is not a single global permutation")]
    NotGloballyDecomposable,
    #[error("geometries differ: `{0}` vs `{1}`")]
    GeometryMismatch(String, String),
    #[error("protocol `{0}` has no published steps")]
    Stub(String),

    #[error("lattice size {0} is too small (need L >= 2)")]
    LatticeTooSmall(usize),
    #[error("invalid code construction: {0}")]
    InvalidCode(String),
    #[error("move `{0}` is not an automorphism of the stabilizer group")]
    NonAutomorphism(String),
    #[error("move is not transversal: qubits {0} and {1} lie on different stack sites")]
    NotTransversal(usize, usize),
    #[error("logical operator could not be reduced: {0}")]
    LogicalReduction(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("Fock cutoff {cutoff} too small: {reason}")]
    CutoffTooSmall { cutoff: usize, reason: String },
    #[error("identity violated: {name} differs by {diff:.3e}")]
    IdentityViolation { name: String, diff: f64 },
    #[error("insufficient measurements; missing: {0:?}")]
    InsufficientMeasurements(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),
}
