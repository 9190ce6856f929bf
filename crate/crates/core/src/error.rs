use thiserror::Error;

use crate::ring::Ring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range (complex has {n_vertices} vertices)")]
    VertexOutOfRange { vertex: u32, n_vertices: u32 },

    #[error("duplicate vertex {0} in simplex")]
    DuplicateVertex(u32),

    #[error("empty simplex")]
    EmptySimplex,

    #[error("{face:?} is not a codimension-one face of {simplex:?}")]
    NotAFacet { face: Vec<u32>, simplex: Vec<u32> },

    #[error("boundary of a vertex is undefined")]
    ZeroDimensionalBoundary,

    #[error("simplices {0:?} and {1:?} are not disjoint")]
    NotDisjoint(Vec<u32>, Vec<u32>),

    #[error("simplex {0:?} is not in the complex")]
    NotInComplex(Vec<u32>),

    #[error("expected a simplex of dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("complex is not a full {k}-skeleton on {expected} vertices: {reason}")]
    NotFullSkeleton { k: usize, expected: usize, reason: String },

    #[error("degenerate placement: {0}")]
    DegeneratePlacement(String),

    #[error("invalid intersection form: {0}")]
    InvalidForm(String),

    #[error("ring mismatch: expected {expected}, got {got}")]
    RingMismatch { expected: Ring, got: Ring },

    #[error("homomorphism has no value on simplex {0:?}")]
    MissingPsiValue(Vec<u32>),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
