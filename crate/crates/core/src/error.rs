use thiserror::Error;

use crate::coloring::ColorId;
use crate::graph::Edge;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree sequence is not graphic")]
    NotGraphic,
    #[error("degree sequence minus {k} is not graphic")]
    NotGraphicMinusK { k: usize },
    #[error("vertex count {n} is odd; an even number of vertices is required")]
    OddVertexCount { n: usize },
    #[error("k = {k} is below the supported domain (k >= 4)")]
    KTooSmall { k: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("edge {0} is not assigned a color")]
    MissingEdge(Edge),
    #[error("edge {0} is assigned more than once")]
    DuplicateEdge(Edge),
    #[error("class {color} is not {expected}-regular: vertex {vertex} has degree {found}")]
    RegularityViolation {
        vertex: usize,
        color: ColorId,
        expected: usize,
        found: usize,
    },
    #[error("batch changes the {color} degree of vertex {vertex} by {delta}")]
    ConservationViolation {
        vertex: usize,
        color: ColorId,
        delta: i64,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(
        "multi-switch chain stuck at link {link} needing color {color} (internal invariant breach)"
    )]
    ChainStuck { link: usize, color: ColorId },
    #[error("path does not alternate with respect to the matching")]
    NotAlternating,
    #[error("path has an odd number of edges")]
    OddLengthPath,
    #[error("initial matching is not a matching of the graph")]
    InvalidInitial,
    #[error("graph is not regular of positive degree")]
    NotRegular,
    #[error("graph is not regular of the requested even degree")]
    NotEvenRegular,
    #[error("cycle has even length")]
    EvenCycle,
    #[error("no cross edge case applies between the two odd cycles (internal invariant breach)")]
    CaseAnalysisExhausted,
    #[error("already {0} one-factors; peeling another carries no guarantee")]
    TooManyOneFactors(usize),
    #[error("realization has no residual class of positive degree")]
    NoResidual,
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("realization search exhausted its budget")]
    SearchExhausted,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
