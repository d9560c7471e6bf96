// index-based loops mirror the matrix notation throughout
#![allow(clippy::needless_range_loop)]

//! Exact symbolic toolkit for iterated Ore extensions over `Q(q)`.
//!
//! The crate certifies the defining axioms of a CGL extension, computes the
//! recursive sequence of homogeneous prime elements, embeds the algebra into
//! its quantum torus, runs the deleting-derivations procedure, and computes
//! the maximal torus acting by the prescribed eigenvalues — all with exact
//! rational-function arithmetic.

pub mod cauchon;
pub mod cgl_verify;
pub mod char_lattice;
pub mod intmat;
pub mod pbw;
pub mod presentation;
pub mod prime_seq;
pub mod quantum_torus;
pub mod report;
pub mod scalars;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operation undefined on the zero element")]
    ZeroElement,

    #[error("syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("unknown presentation name: {0}")]
    UnknownName(String),

    #[error("inverse rewrite did not terminate within the step budget")]
    UndefinedInverseRewrite,

    #[error("nilpotence bound {0} exceeded")]
    BoundExceeded(u32),

    #[error("presentation is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("prime sequence fails at step {k}: delta_{k} is nonzero on more than one active prime ({j1} and {j2})")]
    MultipleNonzeroDelta { k: usize, j1: usize, j2: usize },

    #[error("prime sequence fails at step {k}: {msg}")]
    PrimeCaseContradiction { k: usize, msg: String },

    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("cannot invert a sum of more than one torus term")]
    NonUnitInversion,

    #[error("search space cap exceeded: {0}")]
    EnumerationCapExceeded(String),

    #[error("{0}")]
    Usage(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
