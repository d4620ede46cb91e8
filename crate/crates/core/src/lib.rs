//! Simulator for adiabatic quantum search.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod grover;
pub mod hamiltonian;
pub mod linalg;

pub use error::{Error, Result};
