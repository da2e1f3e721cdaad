use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid Pauli letter {letter:?} at position {position}")]
    InvalidPauliLetter { letter: char, position: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("term {term}: {message}")]
    InvalidTerm { term: usize, message: String },

    #[error("term {term}: coefficient has nonzero imaginary part {im}")]
    NonRealCoefficient { term: usize, im: f64 },

    #[error("hamiltonian has no terms")]
    EmptyHamiltonian,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{n_qubits} qubits exceeds the dense cap of {cap} for {what}")]
    DimensionCap {
        n_qubits: usize,
        cap: usize,
        what: &'static str,
    },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("structural violation at order {order}: residual {residual:e} exceeds {tolerance:e}")]
    StructuralViolation {
        order: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("target epsilon {epsilon:e} unreachable with r <= {cap}")]
    Unreachable { epsilon: f64, cap: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
