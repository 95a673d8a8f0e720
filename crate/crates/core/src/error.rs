use thiserror::Error;

/// Errors produced by state algebra, optical elements, sampling, tomography
/// and configuration handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate path identifier '{0}' in qubit register")]
    DuplicatePath(String),

    #[error("operator arity {arity} does not match {targets} target qubit(s)")]
    ArityMismatch { arity: usize, targets: usize },

    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("target qubit indices must be distinct")]
    RepeatedTarget,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected a {expected}-qubit state, got {actual} qubits")]
    WrongQubitCount { expected: usize, actual: usize },

    #[error("matrix is not a valid operator: {0}")]
    InvalidOperator(String),

    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("observable is not Hermitian (max deviation {0:.3e})")]
    NonHermitianObservable(f64),

    #[error("partial trace requires a nonempty set of kept qubits")]
    EmptyKeep,

    #[error("source kind {0:?} not accepted by this constructor")]
    WrongSourceKind(String),

    #[error("transducer input qubit {index} is labeled {found_nm} nm, expected 1560 nm")]
    NotInfrared { index: usize, found_nm: u32 },

    #[error("PBS inputs carry different wavelength labels ({0} nm vs {1} nm); photons are distinguishable")]
    WavelengthMismatch(u32, u32),

    #[error("parameter {name} out of range: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("count records do not cover the full tomography design ({missing} setting(s) missing)")]
    MissingSettings { missing: usize },

    #[error("linear system is rank-deficient; cannot invert measurement design")]
    RankDeficient,

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("malformed counts file at line {line}: {message}")]
    CountsFormat { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
