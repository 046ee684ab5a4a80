use thiserror::Error;

/// Errors raised by the exact geometry and classification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not unimodular: determinant {0}")]
    NotUnimodular(String),
    #[error("monodromy must have determinant 1, got {0}")]
    NotMonodromy(String),
    #[error("center not interior")]
    CenterNotInterior,
    #[error("degenerate segment")]
    DegenerateSegment,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a Markov triple: ({0}, {1}, {2})")]
    NotMarkov(String, String, String),
    #[error("vertex {0} carries no node")]
    UnarmedVertex(usize),
    #[error("vertex {0} already carries a node")]
    AlreadyArmed(usize),
    #[error("not mutable along w: {0}")]
    NotMutable(String),
    #[error("not an edge of the Newton polytope")]
    NotAnEdge,
    #[error("point outside the polytope")]
    OutsideDomain,
    #[error("function is not concave")]
    NonConcave,
    #[error("function is not positive on the open interval")]
    NonPositive,
    #[error("apex is not equidistant from all facets")]
    ApexNotMonotone,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
