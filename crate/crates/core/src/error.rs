use thiserror::Error;

use crate::quantum::QubitLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate qubit label {0}")]
    DuplicateLabel(QubitLabel),

    #[error("unknown qubit label {0}")]
    UnknownLabel(QubitLabel),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("register of {0} qubits exceeds the supported maximum of {max}", max = crate::quantum::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error("empty keep set")]
    EmptyKeepSet,

    #[error("register mismatch: {0}")]
    RegisterMismatch(String),

    #[error("basis not orthonormal (max deviation {0:.3e})")]
    BasisNotOrthonormal(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("annihilated state")]
    AnnihilatedState,

    #[error("input state is not normalized: |alpha|^2 + |beta|^2 = {0}")]
    NotNormalized(f64),

    #[error("symmetric state index {ones} out of range for {qubits} qubits")]
    SymmetricIndexOutOfRange { qubits: usize, ones: usize },

    #[error("accepted outcome set is empty")]
    EmptyAcceptedSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(String),
}
