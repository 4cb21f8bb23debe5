//! Exact restricted nonnegative matrix factorization (RNMF).
//!
//! The crate covers the correspondence between RNMF and the nested polytope
//! problem, a rational minimum-vertex nested polygon solver for the planar
//! case (which yields minimal RNMFs of rank-3 matrices), and the labelled
//! Markov chain gadgets relating NMF to chain coverability. All arithmetic is
//! exact over Q or Q(sqrt2).

pub mod data;
pub mod exact;
pub mod geometry;
pub mod linalg;
pub mod lmc;
pub mod npp2d;
pub mod reductions;
pub mod report;
pub mod text;
pub mod verify;

pub use exact::{Field, QuadraticNumber, Rational};
pub use linalg::FieldMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] exact::ArithError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("not stochastic: {0}")]
    NotStochastic(String),
    #[error("zero matrix")]
    ZeroMatrix,
    #[error("rank {0} matrix gives a 0-dimensional nested polytope problem; its restricted nonnegative rank equals its rank")]
    DimensionZero(usize),
    #[error("unsupported rank {0} (at most 3 is supported)")]
    UnsupportedRank(usize),
    #[error("point lies in the interior of the inner polygon")]
    InsideInner,
    #[error("point is not on edge {0}")]
    NotOnEdge(usize),
    #[error("not nested: {0}")]
    NotNested(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("factorization is not restricted: {0}")]
    NotRestricted(String),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("incompatible ray chain at position {0}")]
    IncompatibleChain(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
