use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("graph for n = {n} has {vertices} vertices, above the cap of {cap}")]
    VertexCap { n: u32, vertices: u64, cap: u64 },

    #[error("cannot draw {needed} distinct names from {available} available {width}-bit strings")]
    NameSpaceExhausted {
        needed: u64,
        available: u64,
        width: u32,
    },

    #[error("edge coloring cannot be made consistent: {0}")]
    ColoringInconsistent(String),

    #[error("graph has no {0} assigned")]
    Missing(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("checksum mismatch: file says {stored}, content hashes to {computed}")]
    Checksum { stored: String, computed: String },

    #[error("graph is not bipartite: edge {0} -- {1} joins two vertices of the same parity")]
    NotBipartite(String, String),

    #[error("momentum {0} is degenerate (sin p = 0)")]
    DegenerateMomentum(f64),

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("oracle contract violated: {0}")]
    Contract(String),

    #[error("root bracketing found {found} roots, expected {expected} (n = {n})")]
    RootCount {
        n: u32,
        found: usize,
        expected: usize,
    },

    #[error("image truncation too small: nearest omitted image has order {order}, needs above {required}")]
    InsufficientTruncation { order: f64, required: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unknown {kind} `{value}`")]
    Unknown { kind: &'static str, value: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
