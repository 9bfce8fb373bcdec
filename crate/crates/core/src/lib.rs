//! Simulation and analysis of quantum oracle algorithms in their two-register
//! setter/solver form.
//!
//! Register `B` holds the problem setting chosen by the setter, register `A`
//! the solver's argument and eventually the solution. The crate reproduces the
//! Grover, Deutsch-Jozsa and Simon circuits on that layout, builds
//! time-symmetrization instances by a forward/backward zigzag through the
//! solver's unitary, and predicts optimal query counts from the classical
//! complexity of problems reduced by half of the setting information.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and the
//! command line live in the `zol` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod akrule;
pub mod bits;
pub mod circuits;
mod error;
pub mod gf2;
pub mod problems;
pub mod qcomplexity;
pub mod statevec;
pub mod timesym;

pub use bits::Bits;
pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Absolute per-amplitude tolerance used for state comparisons.
pub const TOLERANCE: f64 = 1e-9;
