use thiserror::Error;

use crate::hypergraph::{Edge, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex set {0:?} has repeated vertices")]
    RepeatedVertex(Vec<VertexId>),
    #[error("edge {edge} has {found} vertices, expected {expected}")]
    WrongUniformity {
        edge: Edge,
        expected: usize,
        found: usize,
    },
    #[error("edge {0} uses a vertex outside the vertex set")]
    EdgeOutsideVertexSet(Edge),
    #[error("clique has {found} vertices, expected {expected}")]
    WrongCliqueSize { expected: usize, found: usize },
    #[error("need q > r >= 1, got q = {q}, r = {r}")]
    BadParameters { q: usize, r: usize },
    #[error("edge {edge} occurs in parts {first} and {second}")]
    EdgeOverlap {
        edge: Edge,
        first: usize,
        second: usize,
    },
    #[error("edge {0} is covered more than once")]
    DoubleCover(Edge),
    #[error("pinned vertices collide at image {0}")]
    PinClash(VertexId),
    #[error("edge {0} is not covered by the decomposition")]
    NotCovered(Edge),
    #[error("modulus {n} is not a prime above {bound}")]
    BadModulus { n: u64, bound: u64 },
    #[error("every {size}-subset of the clique lies inside one on-clique")]
    NoTargetSet { size: usize },
    #[error("clique {0:?} is not a clique of the on-decomposition")]
    NotAnOnClique(Vec<VertexId>),
    #[error("on-clique at {0} meets the base clique outside the edge")]
    NotClean(Edge),
    #[error("cliques share {0} vertices; a hinge needs exactly one shared edge")]
    NotSingleEdgeIntersection(usize),
    #[error("graph is not K_q^r-divisible")]
    NotDivisible,
    #[error("graph has {found} vertices, the integral solver needs at least {needed}")]
    TooFewVertices { needed: usize, found: usize },
    #[error("{found} vertices exceed the configured cap of {cap}")]
    CapExceeded { cap: usize, found: usize },
    #[error("integer system has no solution")]
    Infeasible,
    #[error("weight does not fit in 64 bits")]
    WeightOverflow,
    #[error("clique counts at edge {0} do not match the target")]
    CountMismatch(Edge),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    /// The variant name, for diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::RepeatedVertex(_) => "RepeatedVertex",
            Error::WrongUniformity { .. } => "WrongUniformity",
            Error::EdgeOutsideVertexSet(_) => "EdgeOutsideVertexSet",
            Error::WrongCliqueSize { .. } => "WrongCliqueSize",
            Error::BadParameters { .. } => "BadParameters",
            Error::EdgeOverlap { .. } => "EdgeOverlap",
            Error::DoubleCover(_) => "DoubleCover",
            Error::PinClash(_) => "PinClash",
            Error::NotCovered(_) => "NotCovered",
            Error::BadModulus { .. } => "BadModulus",
            Error::NoTargetSet { .. } => "NoTargetSet",
            Error::NotAnOnClique(_) => "NotAnOnClique",
            Error::NotClean(_) => "NotClean",
            Error::NotSingleEdgeIntersection(_) => "NotSingleEdgeIntersection",
            Error::NotDivisible => "NotDivisible",
            Error::TooFewVertices { .. } => "TooFewVertices",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::Infeasible => "Infeasible",
            Error::WeightOverflow => "WeightOverflow",
            Error::CountMismatch(_) => "CountMismatch",
            Error::Internal(_) => "Internal",
        }
    }

    /// Whether the error points at a bug rather than at bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_) | Error::EdgeOverlap { .. })
    }
}
