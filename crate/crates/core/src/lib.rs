//! Coherent scattering from one-dimensional complex potentials.
//!
//! Computes transmission, left/right reflection and the coherent-injection
//! S-matrix determinant by direct integration, checks them against closed
//! forms for the Scarf II family and an exact slab solution for the
//! rectangular family, and locates spectral singularities and coherent
//! perfect absorption (with or without lasing).

// `!(x <= y)` is used on purpose so that NaN lands on the failing side
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod config;
pub mod detect;
pub mod error;
pub mod numeric;
pub mod optimize;
pub mod oracle;
pub mod potential;
pub mod smatrix;
pub mod transfer;

pub use error::{Result, ScatterError};
pub use numeric::{scattering_at, solve_left, solve_right, Propagator, ScatteringPoint, SolverConfig};
pub use potential::{PotentialSpec, ScarfII, SymmetryClass, SymmetryKind};
