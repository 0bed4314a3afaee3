use thiserror::Error;

/// Errors raised by the simulation engine and the scheme catalog.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    EmptyDimension,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("mode index {index} out of range 1..={modes}")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("two-mode embedding needs distinct modes i < j, got ({i}, {j})")]
    InvalidModePair { i: usize, j: usize },

    #[error("matrix is not unitary within {tol:e}")]
    NotUnitary { tol: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("permanent dimension {dim} exceeds the limit of {limit} for this kernel")]
    PermanentTooLarge { dim: usize, limit: usize },

    #[error("photon number mismatch: {inputs} input photons, {outputs} output photons")]
    PhotonCountMismatch { inputs: usize, outputs: usize },

    #[error("state-space guard: {photons} photons exceeds the limit of {limit}")]
    TooManyPhotons { photons: usize, limit: usize },

    #[error("photon amplitudes not normalized: |a_mu|^2 + |a_eta|^2 = {norm}")]
    NotNormalized { norm: f64 },

    #[error("pattern has {got} modes, the network has {expected}")]
    PatternModes { expected: usize, got: usize },

    #[error("output pattern holds no photons")]
    EmptyPattern,

    #[error("internal assignment does not refine the output pattern")]
    AssignmentMismatch,

    #[error("invalid scheme parameters: {0}")]
    InvalidScheme(String),

    #[error("unknown name: {0}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
