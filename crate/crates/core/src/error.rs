use thiserror::Error;

/// Errors raised by graph construction, exact linear algebra and the
/// polynomial machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("edge set contains a cycle")]
    CyclicEdgeSet,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has {edges} edges, above the enumeration cap of {cap}")]
    EdgeCapExceeded { edges: usize, cap: usize },
    #[error("forest does not live in the complete graph K_{0}")]
    NotInCompleteGraph(usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("claimed multiplicities sum to {found}, matrix dimension is {expected}")]
    MultiplicityMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("operator and polynomial use different variable universes")]
    UniverseMismatch,
    #[error("variable universe of size {0} exceeds the supported 64 variables")]
    UniverseTooLarge(usize),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {k} out of range 0..={max}")]
    DegreeOutOfRange { k: usize, max: usize },
    #[error("invalid block structure: {0}")]
    InvalidBlockStructure(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
