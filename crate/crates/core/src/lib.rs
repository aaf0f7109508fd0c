//! Simulation and verification library for quantum homogenization in
//! collisional models of open qubit systems.
//!
//! A system qubit collides sequentially with a stream of identically
//! prepared ancilla qubits. Collisions are partial-swap unitaries; an
//! optional ancilla-ancilla collision between consecutive ancillas makes
//! the dynamics non-Markovian. The crate provides
//!
//! - [`qstate`]: dense complex linear algebra (states, unitaries, partial
//!   traces, Uhlmann fidelity) used as the brute-force oracle,
//! - [`recurrence`]: closed-form Bloch-vector recurrences for the same
//!   dynamics, including rotated and scaled proof variants,
//! - [`engine`]: density-matrix collision schedulers (Markovian model,
//!   three non-Markovian trace-out schemes, full-swap memory example),
//! - [`analysis`]: convergence detection, rate comparison, and
//!   universality classification of collision unitaries,
//! - [`verify`]: self-check suites cross-validating the recurrences
//!   against the dense engines.

pub mod analysis;
pub mod engine;
mod error;
pub mod qstate;
pub mod recurrence;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
