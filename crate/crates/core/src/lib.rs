//! Sparse resultant-matrix solver for systems of Laurent polynomial equations.
//!
//! The pipeline builds monomial bases from Newton polytopes, assembles the
//! matrix of `(g0, …, gk) ↦ f0 g0 + Σ fi gi`, eliminates its second block and
//! reads solutions off the left eigenvectors of the reduced matrix.

#![allow(clippy::needless_range_loop)]

pub mod adapters;
pub mod assembly;
pub mod eigensolver;
pub mod extractor;
pub mod io;
pub mod lattice;
pub mod laurent;
pub mod oracle;
pub mod solver;
