//! Crate-wide error type.
//!
//! Validation failures name the offending quantity and carry the measured
//! value, so a rejected scenario file or a failed physical precondition can be
//! diagnosed from the message alone.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("{what} has dimension {actual}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |A - A\u{2020}| entry is {max_asymmetry:.3e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("{what} norm is {norm:.17}, expected 1 within {tolerance:.1e}")]
    NotUnitNorm {
        what: &'static str,
        norm: f64,
        tolerance: f64,
    },

    #[error("density matrix trace is {trace:.17}, expected 1 within {tolerance:.1e}")]
    InvalidTrace { trace: f64, tolerance: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("{what} are not orthogonal: |overlap| is {overlap:.3e}")]
    NotOrthogonal { what: &'static str, overlap: f64 },

    #[error("{what} is not a projector: max |Z\u{00b2} - Z| entry is {defect:.3e}")]
    NotProjector { what: &'static str, defect: f64 },

    #[error("invalid PVM: {reason}")]
    InvalidPvm { reason: String },

    #[error(
        "eigendecomposition failed to converge for a {dim}x{dim} matrix \
         (largest entry magnitude {max_abs_entry:.3e})"
    )]
    EigenFailure { dim: usize, max_abs_entry: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "system Hamiltonian is degenerate in the measured basis: \
         |<q0|H|q0> - <q1|H|q1>| is {gap:.3e}"
    )]
    DegenerateSystemHamiltonian { gap: f64 },

    #[error(
        "packet shift {shift} reaches the periodic boundary (limit {limit}); \
         the translated packet would wrap around and overlap the original"
    )]
    WraparoundShift { shift: f64, limit: f64 },

    #[error(
        "system Hamiltonian commutes with the measured projector \
         (commutator norm {commutator_norm:.3e}); the coupling estimate is vacuous"
    )]
    CommutingSystemHamiltonian { commutator_norm: f64 },

    #[error(
        "apparatus packet is not sharp enough: initial branch overlap {overlap:.3e} \
         exceeds the regime bound {limit:.3e}"
    )]
    PacketNotSharp { overlap: f64, limit: f64 },

    #[error("scenario field {path}: {message}")]
    Schema { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
