use thiserror::Error;

/// Errors raised by constructions and checks in this crate.
///
/// Identity checks that merely fail are not errors: they come back as reports
/// carrying a witness. An `Error` means the inputs violate a precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("algebra `{0}` has no involution")]
    NoInvolution(String),

    #[error("algebra `{label}` is not commutative: e{i}*e{j} != e{j}*e{i}; jet modules are only defined over commutative algebras")]
    NonCommutative { label: String, i: usize, j: usize },

    #[error("algebra axiom violated: {0}")]
    AlgebraAxiom(String),

    #[error("module axiom violated: {0}")]
    ModuleAxiom(String),

    #[error("not a derivation: Leibniz rule fails on (e{i}, e{j})")]
    NotADerivation { i: usize, j: usize },

    #[error("module kinds do not compose: {0}")]
    KindMismatch(String),

    #[error("derivation frame: {0}")]
    Frame(String),

    #[error("not a differential operator of order {order}: {detail}")]
    NotADiffOperator { order: usize, detail: String },

    #[error("not a splitting: {0}")]
    NotASplitting(String),

    #[error("Leibniz rule violated: {0}")]
    LeibnizViolation(String),

    #[error("not module-linear: {0}")]
    NotModuleLinear(String),

    #[error("duality map is not invertible: {0}")]
    DualityDegenerate(String),

    #[error("not an idempotent: {0}")]
    NotIdempotent(String),

    #[error("degree {degree} exceeds the configured bound {bound}")]
    DegreeBound { degree: usize, bound: usize },

    #[error("spectral triple axiom violated: {0}")]
    TripleAxiom(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
