//! Exact-simulation laboratory for domain-wall chain gadgets.
//!
//! The crate builds chain and driver Hamiltonians over a data+ancilla qubit
//! register, constructs the encoding unitary and logical projector by exact
//! per-sector diagonalization, evolves states exactly by eigendecomposition,
//! and evaluates leakage/fidelity process metrics. Seeded experiment drivers
//! reproduce the reference dynamics (GHZ preparation, perturbed driving,
//! logical bit flips, infidelity sweeps, minor-embedding noise suppression)
//! as CSV series with JSON manifests.
//!
//! Everything is desk-scale by design: registers are capped (14 qubits by
//! default) so dense linear algebra stays exact and fast.

pub mod dense;
pub mod encoding;
pub mod error;
pub mod experiments;
pub mod gadget;
pub mod io;
pub mod metrics;
pub mod parallel;
pub mod pauli;
pub mod register;
pub mod state;

pub use dense::{realize, DenseOperator, Sign, SpectralDecomposition};
pub use error::{Error, Result};
pub use pauli::{OperatorSum, Pauli, PauliString};
pub use register::QubitRegister;
pub use state::{evolve, propagator, StateVector};
