//! Compiler and verification toolkit for circuit-to-XZ-Hamiltonian
//! reductions.
//!
//! Verification circuits over `{X, CX, CCX, HH}` or `{X, CZ, CCZ, G}` are
//! compiled into standard form and turned into 6-local projector instances
//! whose terms are each diagonal in the Z or the X basis. Gate identities,
//! projector validity and history-state completeness are checked exactly over
//! `Z[1/2, √2]`; spectral claims are checked numerically.

pub mod circuit;
pub mod clock;
pub mod cnf;
pub mod gates;
pub mod hamiltonian;
pub mod identities;
pub mod matrix;
pub mod protocols;
pub mod registry;
pub mod ring;
pub mod spectral;
pub mod state;

pub use gates::{Gate, GateKind};
pub use ring::RingReal;
pub use state::{ExactState, NumericState, StateVector};
