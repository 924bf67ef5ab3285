use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("qubit {0} is used both as control and target")]
    OverlappingQubits(usize),
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("dimension mismatch: circuit has {circuit} qubits, state has {state}")]
    DimensionMismatch { circuit: usize, state: usize },
    #[error("{0} qubits exceeds the simulator limit of {max}", max = crate::qsim::MAX_QUBITS)]
    TooManyQubits(usize),
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("probabilities are not normalized (sum = {0})")]
    UnnormalizedProbabilities(f64),
    #[error("level {0} is outside (0, 1)")]
    InvalidLevel(f64),
    #[error("invalid objective: {0}")]
    InvalidObjective(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("division by an estimated tail probability of zero")]
    ZeroTailProbability,
    #[error("Grover power {0} exceeds the cap of 2^20")]
    PowerTooLarge(u64),
    #[error("{algorithm} did not converge: {reason}")]
    NotConverged { algorithm: &'static str, reason: String },
}
