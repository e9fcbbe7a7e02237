//! Centralized numerical tolerances.
//!
//! Every validation threshold used by the crate is defined here rather than
//! inline, so the acceptance suite and the library agree on what "equal" means.
//! The values fall into two bands: construction-time checks on user input
//! (1e-10, close to what exact arithmetic on normalized data can achieve) and
//! checks downstream of dense eigensolves (1e-9 / 1e-8, which absorb the
//! accumulated rounding of O(n³) decompositions up to dimension ~2048).

/// Max-entry deviation allowed between a matrix and its adjoint.
pub const HERMITICITY: f64 = 1e-10;

/// Allowed deviation of a state vector's Euclidean norm from 1.
pub const UNIT_NORM: f64 = 1e-10;

/// Allowed deviation of a density matrix trace from 1.
pub const STATE_TRACE: f64 = 1e-9;

/// Eigenvalue floor for positive semidefinite checks. Eigenvalues in
/// [-STATE_PSD, 0) are treated as rounding noise and clipped to zero;
/// anything below is a genuinely invalid state.
pub const STATE_PSD: f64 = 1e-9;

/// Allowed overlap magnitude between vectors required to be orthogonal.
pub const ORTHOGONALITY: f64 = 1e-10;

/// Max-entry tolerance for projector idempotency (`Z² = Z`) and for
/// PVM orthogonality/completeness checks.
pub const PROJECTOR: f64 = 1e-9;

/// Absolute slack allowed when certifying the trade-off inequalities.
/// Eigensolver-limited: every term is a norm or fidelity computed through a
/// dense Hermitian eigensolve.
pub const SLACK: f64 = 1e-9;

/// Tolerance for identities that hold in exact arithmetic on 2×2 data,
/// e.g. the commutator-norm/matrix-element identity.
pub const IDENTITY: f64 = 1e-10;

/// Minimum spectral gap below which a system Hamiltonian is treated as
/// degenerate where its spectral projectors are required individually.
pub const DEGENERACY: f64 = 1e-10;

/// Trace preservation required of the partial trace.
pub const TRACE_PRESERVATION: f64 = 1e-10;

/// Max-entry tolerance for matrix-function reconstruction checks
/// (`sqrt(ρ)² = ρ` and friends).
pub const MATRIX_FUNCTION: f64 = 1e-8;

/// Per-dimension eigenvalue noise floor for spectra of unit-scale positive
/// operators (density matrices and their products). A computed eigenvalue
/// below `dim * SPECTRAL_FLOOR` is a rounding artifact of the dense
/// eigensolve; a square-root matrix function would amplify it from O(eps)
/// to O(sqrt(eps)), so such eigenvalues are clipped to zero first.
pub const SPECTRAL_FLOOR: f64 = f64::EPSILON;
