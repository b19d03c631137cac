//! Entanglement cost and distillable-entanglement bounds for quantum
//! channels.
//!
//! The crate is organized bottom-up:
//!
//! - [`numkit`]: complex linear algebra, partial traces/transposes, entropies.
//! - [`channels`]: Kraus channels for the erasure, dephasing, depolarizing,
//!   Werner–Holevo and epolarizing families; Choi states, complements,
//!   covariance checks and teleportation simulation.
//! - [`measures`]: relative entropy, entanglement of formation (exact for two
//!   qubits, upper-bound search otherwise), coherent information.
//! - [`formulas`]: closed-form costs and bounds for every channel family.
//! - [`rains`]: a projected-gradient solver for the Rains relative entropy.
//! - [`gaussian`]: covariance-matrix engine for bosonic Gaussian states and
//!   the heterodyne evaluation of entanglement of formation.

pub mod channels;
pub mod error;
pub mod formulas;
pub mod gaussian;
pub mod measures;
pub mod numkit;
pub mod rains;

pub use error::{Error, Result};
