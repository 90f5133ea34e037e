use thiserror::Error;

/// Errors raised by graph loading, bundle validation and the analyses built on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: malformed edge `{text}`")]
    MalformedLine { line: usize, text: String },

    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),

    #[error("graph is disconnected: vertex {unreached} unreachable from 0")]
    Disconnected { unreached: u32 },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("vertex id {id} out of range (vertex count {count})")]
    InvalidVertex { id: u32, count: usize },

    #[error("empty vertex set passed to {0}")]
    EmptySet(&'static str),

    #[error("projection is not simplicial: edge ({u},{v}) maps to non-adjacent base vertices ({bu},{bv})")]
    NotSimplicial { u: u32, v: u32, bu: u32, bv: u32 },

    #[error("projection misses base vertex {0}")]
    NotSurjective(u32),

    #[error("fiber over base vertex {base} is disconnected (vertex {witness} unreachable)")]
    DisconnectedFiber { base: u32, witness: u32 },

    #[error("vertex {vertex} over base {base} has no edge into the fiber over adjacent base vertex {target}")]
    MissingCrossEdge { vertex: u32, base: u32, target: u32 },

    #[error("projection has {got} entries, total graph has {expected} vertices")]
    ProjectionLength { got: usize, expected: usize },

    #[error("base vertices {0} and {1} are not adjacent")]
    NotAdjacent(u32, u32),

    #[error("no points lie over net vertex {0}")]
    EmptyNetFiber(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse monodromy `{0}`")]
    Monodromy(String),

    #[error("monodromies do not commute on generator {0}")]
    NonCommutingMonodromy(char),

    #[error("instance too small: {0}")]
    InstanceTooSmall(String),

    #[error("ladder neighborhood C_{radius} is disconnected")]
    DisconnectedLadder { radius: u32 },

    #[error("section does not cover base vertex {0} correctly")]
    BadSection(u32),

    #[error("bundle file: {0}")]
    BundleFormat(String),

    #[error("size {size} exceeds the exact-mode cap {cap}; enable sampling")]
    TooLarge { size: usize, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
