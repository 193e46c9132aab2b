use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("system width mismatch: expected {expected} qubits, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("{what} exceeds the dense ceiling ({limit}); {hint}")]
    CeilingExceeded {
        what: String,
        limit: usize,
        hint: String,
    },

    #[error("qubit index {index} out of range for {width}-qubit circuit")]
    QubitOutOfRange { index: usize, width: usize },

    #[error("control and target qubits overlap at qubit {0}")]
    OverlappingQubits(usize),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("phase solver did not converge: residual {residual:.3e} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
