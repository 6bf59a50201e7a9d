//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by transforms, metrics, solvers and family construction.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeoError {
    /// A diagonal entry of the input unitary is not on the unit circle.
    #[error("entry {index} has modulus {modulus} (must be 1 within {tolerance})")]
    NonUnitModulus {
        index: usize,
        modulus: f64,
        tolerance: f64,
    },

    /// Vector lengths do not match the expected dimension `2^n`.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Input length is not a power of two, so no qubit count fits it.
    #[error("length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },

    /// A phase or coefficient is NaN or infinite.
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    /// Pauli mask has bits outside the `n`-qubit range.
    #[error("mask {mask:#b} out of range for {n} qubits")]
    MaskOutOfRange { mask: usize, n: usize },

    /// The metric specification is unusable for the requested operation.
    #[error("invalid metric spec: {reason}")]
    InvalidSpec { reason: String },

    /// Instance exceeds the solver's supported size or search budget.
    #[error("instance too large for {solver}: {reason}")]
    TooLarge { solver: &'static str, reason: String },

    /// Family construction needs a Pauli string of weight at least 3.
    #[error("pauli weight {weight} is below the required minimum 3")]
    WeightTooLow { weight: u32 },

    /// Family construction needs at least 3 qubits.
    #[error("qubit count {n} is below the required minimum 3")]
    BadDimension { n: usize },

    /// Perturbation magnitude breaks the eigenvalue-distinctness argument.
    #[error("epsilon {epsilon} must be below pi/N = {limit}")]
    EpsilonTooLarge { epsilon: f64, limit: f64 },

    /// Curve parameter outside `[0, 1]`.
    #[error("curve parameter t = {t} outside [0, 1]")]
    DomainError { t: f64 },

    /// Numerical factorization failed (should not happen on valid instances).
    #[error("numerical failure: {reason}")]
    Numerical { reason: String },
}

pub type Result<T> = std::result::Result<T, GeoError>;
