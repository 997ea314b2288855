//! Truncated Fock-space numerics for SU(1,1) and exponential-phase coherent
//! states, and classical light propagation in the waveguide lattices they solve.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
pub use fock::{ComplexAmplitude, FockVector, TruncatedOperator};
