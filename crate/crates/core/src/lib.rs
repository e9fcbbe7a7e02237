//! Simulation and certification of interaction-strength / duration / accuracy
//! trade-offs in two-level quantum measurement processes.
//!
//! A measurement process couples a two-level system to a finite-dimensional
//! apparatus through a joint Hamiltonian for a fixed duration. The library
//! builds such processes, evolves them exactly by dense eigendecomposition,
//! and certifies the inequalities that bound how well the apparatus can
//! distinguish the measured states given the coupling strength and duration:
//!
//! * distinguishability of the conditional apparatus states (fidelity and
//!   minimum-error discrimination),
//! * the trade-off bound relating the measured observable's non-commutativity
//!   with the system Hamiltonian to fidelity plus a coupling term,
//! * drift of Heisenberg-picture observables,
//! * the induced joint energy/pointer observable and its marginals.
//!
//! [`linalg`] supplies the validated dense types, [`process`] the process
//! model and certificates, [`random`] seeded ensembles for fuzzing,
//! [`oracles`] slow independent recomputations used to cross-check the fast
//! paths, [`models`] concrete apparatus constructions, and [`scenario`] the
//! JSON interchange format.

pub mod error;
pub mod linalg;
pub mod models;
pub mod oracles;
pub mod process;
pub mod random;
pub mod scenario;
pub mod tol;

pub use error::{Error, Result};
