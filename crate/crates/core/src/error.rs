use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("incompatible algebras: elements belong to different generator pools")]
    PoolMismatch,
    #[error("generator pool exhausted ({0} generators)")]
    PoolExhausted(usize),
    #[error("generator {0} has no conjugate partner")]
    UnpairedGenerator(String),
    #[error("element has no logarithm: its scalar part vanishes")]
    NoLogarithm,
    #[error("cell index {k} out of range 1..={n}")]
    CellOutOfRange { k: usize, n: usize },
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("gate `{0}` requires a parameter")]
    MissingParameter(String),
    #[error("gate `{0}` takes no parameter")]
    UnexpectedParameter(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("covariant symbol undefined for a {n_out}x{n_in}-cell operator")]
    NotSquare { n_in: usize, n_out: usize },
    #[error("symbol kind mismatch: {0}")]
    SymbolKind(String),
    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("empty word")]
    EmptyWord,
    #[error("letter `{0}` has no exponential form")]
    NoExponentialForm(String),
    #[error("unsupported circuit topology: {0}")]
    Topology(String),
    #[error("representations disagree: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
