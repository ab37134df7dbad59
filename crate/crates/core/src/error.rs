use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m - m†| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid dimension {0}: must be 2^n with n >= 1")]
    InvalidDimension(usize),

    #[error("qubit index {index} out of range for {n_qubits}-qubit device")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("invalid device parameters: {0}")]
    InvalidDevice(String),

    #[error("coupling ratio E_L/E_J = {actual:.9} but U(tau) requires sqrt(15) = {required:.9}")]
    CouplingRatio { required: f64, actual: f64 },

    #[error("interaction energy is zero; use single-qubit evolution instead")]
    ZeroInteraction,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("probability {0:e} outside [0, 1] beyond the clamping window")]
    ProbabilityOutOfRange(f64),

    #[error("missing measurement record for setting {index} ({label})")]
    MissingRecord { index: usize, label: String },

    #[error("malformed relation for {target}: {reason}")]
    MalformedRelation { target: String, reason: String },

    #[error("incomplete coefficient set: {0}")]
    IncompleteCoefficients(String),

    #[error("unresolved prerequisites for {target}: {}", missing.join(", "))]
    UnresolvedDependencies { target: String, missing: Vec<String> },

    #[error("schedule search exhausted its budget at rank {rank}/{full}; unresolved: {}", unresolved.join(", "))]
    RankDeficient { rank: usize, full: usize, unresolved: Vec<String> },

    #[error("channel is not trace preserving: max |sum K†K - I| = {residual:e}")]
    NotTracePreserving { residual: f64 },

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange { name: String, value: f64, range: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("physics invariant violated: {0}")]
    Invariant(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
