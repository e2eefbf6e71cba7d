use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state is not normalized (|norm - 1| = {0:e})")]
    NotNormalized(f64),
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("concurrence {0} is outside [0, 1]")]
    ConcurrenceOutOfRange(f64),
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
    #[error("closed form is only defined for the uniform start state (overlap 1/sqrt(N))")]
    NotUniform,
    #[error("{what} needs at least {min} qubits, got {got}")]
    TooFewQubits {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("marked index {marked} is out of range for dimension {dim}")]
    MarkedOutOfRange { marked: usize, dim: usize },
    #[error("integration step {dt} is too large (dt*E*sqrt(N) = {bound} > 0.1)")]
    StepTooLarge { dt: f64, bound: f64 },
    #[error("invalid time {0}")]
    InvalidTime(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
