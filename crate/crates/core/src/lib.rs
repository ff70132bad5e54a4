//! Exact spectral analysis of multi-state Grover walks on cycle graphs.
//!
//! The crate builds the evolution operator `U` of an M- or F-type walk with `L` chirality
//! states on the cycle `C_N`, factors its characteristic polynomial through momentum
//! sectors over `Q(zeta_N)`, decides the period of the walk with a checkable certificate,
//! and derives the walk zeta function together with its absolute-zeta data.

pub mod arith;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod period;
pub mod spectral;
pub mod verify;
pub mod walk;
pub mod zeta;

pub use error::{Error, Result};
