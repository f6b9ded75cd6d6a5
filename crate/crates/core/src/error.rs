use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^16")]
    NotPrime(u32),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u16, right: u16 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("leading {0}x{0} block is singular under this column order")]
    SingularTopLeft(usize),

    #[error("invalid weight table: {0}")]
    InvalidWeightTable(String),

    #[error("weight {omega} outside [0, {max}]")]
    WeightOutOfRange { omega: f64, max: f64 },

    #[error("no vector of length {n} has weight {weight}")]
    EmptySphere { n: usize, weight: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("list size {size} exceeds cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("infeasible parameter point: {0}")]
    Infeasible(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
