//! System builders for dense, trilinear, and sphere-constrained trilinear problems.

mod dense;
mod lagrange;
mod tensor;
mod trilinear;

use thiserror::Error;

use crate::assembly::AssemblyError;
use crate::lattice::LatticeError;
use crate::laurent::LaurentError;
use crate::solver::SolveError;

pub use dense::dense_system;
pub use lagrange::{
    commutator_tensors, lagrange_chart, lagrange_system, random_orthogonal, trilinear_max, trilinear_max_with,
    TrilinearMax, TrilinearMaxOptions, TRILINEAR_POLISH_WINDOW,
};
pub use tensor::Tensor3;
pub use trilinear::{block_polytope, trilinear_system, TrilinearSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdapterError {
    #[error("invalid tensor: {0}")]
    BadTensor(String),
    #[error("the tensor is zero")]
    ZeroTensor,
    #[error("invalid degrees: {0}")]
    BadDegrees(String),
    #[error("at least one equation is required")]
    NoEquations,
    #[error("equation {0} exceeds multidegree (1, 1, 1)")]
    MultidegreeExceeded(usize),
    #[error("no real critical point was accepted")]
    NoAcceptedSolutions,
    #[error("rank(M22) = q was not reached within the size limits after {} attempts", attempts.len())]
    EscalationExhausted { attempts: Vec<([i64; 3], String)> },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}
