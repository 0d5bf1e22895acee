use thiserror::Error;

/// Errors raised across the compiler. Parse errors carry a 1-based line number.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("width mismatch: {left} vs {right} qubits")]
    WidthMismatch { left: usize, right: usize },

    #[error("qubit {qubit} out of range for width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },

    #[error("mode {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("invalid qubit set: {0}")]
    InvalidQubitSet(String),

    #[error("gate {0} is not a supported Clifford")]
    UnsupportedGate(String),

    #[error("invalid excitation: {0}")]
    InvalidExcitation(String),

    #[error("operator is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("dimension too large: {qubits} qubits (limit {limit})")]
    DimensionTooLarge { qubits: usize, limit: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("symmetry violation between {first:?} and {second:?}: deviation {deviation:e}")]
    SymmetryViolation {
        first: Vec<usize>,
        second: Vec<usize>,
        deviation: f64,
    },

    #[error("reality mismatch: {0}")]
    RealityMismatch(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported schema: {0}")]
    Schema(String),

    #[error("identity Pauli string has no rotation circuit; use a global phase gate")]
    IdentityRotation,
}

pub type Result<T> = std::result::Result<T, Error>;
