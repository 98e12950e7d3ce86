//! Weak-measurement quantum Zeno protection of stabilizer-encoded states.
//!
//! The crate is organised bottom-up:
//!
//! - [`pauli`]: symplectic Pauli arithmetic and stabilizer codes, including the
//!   `[[n, n-2, 2]]` error-detection code and its logical operators.
//! - [`hilbert`]: dense operators and density matrices on labelled tensor
//!   factorizations (system qubits followed by an optional bath).
//! - [`measurement`]: weak two-outcome measurements and the generator/group
//!   Kraus channels built from them.
//! - [`protocol`]: interleaving of joint unitary evolution with measurement
//!   channels, the ideal reference evolution and the deviation metric.
//! - [`bounds`]: closed-form distance bounds and parameter sweeps.
//! - [`twolocal`]: realisation of a many-body weak measurement with a cat-state
//!   ancilla, two-qubit gates and a single-qubit weak measurement.
//! - [`experiment`]: JSON-driven simulation runs emitting deviation/bound rows.
//! - [`verify`]: self-check suites aggregating the invariants above.

pub mod bounds;
pub mod error;
pub mod experiment;
pub mod hilbert;
pub mod measurement;
pub mod pauli;
pub mod protocol;
pub mod twolocal;
pub mod verify;

pub use error::{Error, Result};
pub use hilbert::{DensityMatrix, Factor, Operator};
pub use measurement::{KrausSet, Strength};
pub use pauli::{Pauli, StabilizerCode};
