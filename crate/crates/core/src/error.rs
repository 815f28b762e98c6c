use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: dangling vertex `{vertex}`")]
    DanglingVertex { line: usize, vertex: String },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("subcurve is empty")]
    EmptySubcurve,
    #[error("genus {genus} is below the required minimum {min}")]
    GenusTooSmall { genus: i64, min: i64 },
    #[error("multidegree has {got} entries, graph has {expected} components")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{what} has {size} elements, exceeding the cap {cap} (raise it explicitly to proceed)")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("{0} gluing vectors exceed the cap of {1}")]
    GluingCapExceeded(u128, u64),
    #[error("operation requires a binary curve")]
    NotBinary,
    #[error("operation requires a curve of compact type")]
    NotCompactType,
    #[error("operation requires a quasistable curve")]
    NotQuasistable,
    #[error("invalid multidegree: {0}")]
    InvalidMultidegree(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} is too small: component {component} needs {needed} distinct points")]
    PrimeTooSmall {
        p: u64,
        component: usize,
        needed: usize,
    },
    #[error("point {point} on component {component} collides with a branch point")]
    BranchPointCollision { component: usize, point: u64 },
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("parameter out of range: {0}")]
    RangeViolation(String),
    #[error("{0}")]
    InvalidInput(String),
}
