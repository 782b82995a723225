use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what}: n = {n} is outside the supported range (max {max})")]
    SizeOutOfRange { what: &'static str, n: usize, max: usize },

    #[error("vertex {vertex} is not a label of [{n}]")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid edge {{{i}, {j}}} for label set [{n}]")]
    InvalidEdge { i: usize, j: usize, n: usize },

    #[error("bit field {bits:#x} sets pairs outside [{n}]")]
    InvalidEdgeBits { n: usize, bits: u64 },

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("partition scheme broken: {0}")]
    SchemeViolation(String),

    #[error("label sets {first} and {second} share {shared} labels; a proper merging allows at most one")]
    OverlappingParts { first: usize, second: usize, shared: usize },

    #[error("parts do not form a proper merging of the whole tree")]
    NotProperMerging,

    #[error("inconsistent sizes: {0}")]
    InconsistentSizes(String),

    #[error("series error: {0}")]
    Series(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("root finding failed: {0}")]
    Bracket(String),

    #[error("series evaluation at {x} did not converge: {reason}")]
    NotConverged { x: f64, reason: String },

    #[error("radius coefficient {radius} disagrees with alpha {alpha} beyond {tolerance:e}")]
    EquivalenceViolation { radius: f64, alpha: f64, tolerance: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that mean "request exceeds a documented cap".
    pub fn is_cap_violation(&self) -> bool {
        matches!(self, Error::SizeOutOfRange { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
