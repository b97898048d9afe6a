use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty graph document")]
    EmptyDocument,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is not a tree")]
    NotATree,

    #[error("vertex {0} has no out-neighbours")]
    DanglingTarget(usize),

    #[error("numerical failure: residual {residual:e} exceeds {limit:e}")]
    NumericalFailure { residual: f64, limit: f64 },

    #[error("k(G) = {k} exceeds the configured limit {k_max}")]
    KTooLarge { k: usize, k_max: usize },

    #[error("unsupported: {0}")]
    UnsupportedScope(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("not a swap automorphism of the graph")]
    NotAnAutomorphism,

    #[error("subset is not contained in the neighbour set of the component")]
    InvalidSubset,

    #[error("cardinality {l} is infeasible (capacity {capacity})")]
    InfeasibleCardinality { l: usize, capacity: usize },
}
