use thiserror::Error;

/// Errors raised by the simulation and optimization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register of {requested} qubits exceeds the supported range 1..={max}")]
    ResourceLimit { requested: usize, max: usize },
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    Index { index: usize, num_qubits: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
