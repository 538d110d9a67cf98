use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("matrix is not of finite order dividing {bound}")]
    InfiniteOrder { bound: u64 },

    #[error("group order exceeds cap {cap}")]
    CapExceeded { cap: usize },

    #[error("generator {index} is not invertible")]
    NonInvertibleGenerator { index: usize },

    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("eigenspace projectors have total rank {got}, expected {expected}")]
    NotSemisimple { got: usize, expected: usize },

    #[error("relation is not antisymmetric on cosets {0} and {1}")]
    Antisymmetry(usize, usize),

    #[error("no generation certificate for element {0}")]
    CertificateFailure(usize),

    #[error("component tagged by element {g} is not in Z")]
    NotCocycle { g: usize },

    #[error("arity mismatch: expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("degree overflow: {p} + {q} exceeds ambient dimension {n}")]
    DegreeOverflow { p: usize, q: usize, n: usize },

    #[error("cochain is not invariant under element {0}")]
    NotInvariant(usize),

    #[error("element {0} is not a class representative")]
    NotClassRepresentative(usize),

    #[error("element {0} is not a product of reflections")]
    Unreachable(usize),

    #[error("cochain is not homogeneous")]
    NotHomogeneous,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("malformed input at {path}: {msg}")]
    Malformed { path: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn malformed(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Malformed {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
