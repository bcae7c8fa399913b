//! Compound-matrix calculus and the k-generalized analyses built on it.
//!
//! The crate computes multiplicative, additive and fractional (α) compounds of
//! real matrices and uses them to decide k-contraction, k-positivity,
//! k-diagonal stability, sign-regularity and Hankel k-positivity of linear and
//! nonlinear systems.

pub mod compound;
pub mod diag_stability;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod hankel;
pub mod index_sets;
pub mod io;
pub mod matrix;
pub mod measures;
pub mod positivity;
pub mod sign_tools;
pub mod spectral;
pub mod tolerance;
pub mod verdict;

pub use error::{Error, Result};
pub use index_sets::IndexSet;
pub use matrix::{ComplexMatrix, Matrix};
pub use verdict::Verdict;
