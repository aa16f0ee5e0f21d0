//! Independent checks for the main pipeline.
//!
//! Nothing here calls into the hull, basis, assembly or eigensolver code. The
//! only shared pieces are the input types and the dense eigenvalue routine used
//! for companion matrices.

mod audit;
mod hull_lp;
mod resultant;
mod univariate;

use thiserror::Error;

pub use audit::{equation_residuals, inf_norm, left_eigen_residual};
pub use hull_lp::{brute_lattice_points, in_convex_hull};
pub use resultant::{bivariate_solve, sylvester_resultant};
pub use univariate::UnivariatePoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("expected polynomials in 2 variables, found {0}")]
    NotBivariate(usize),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("neither polynomial involves the eliminated variable")]
    NoEliminatedVariable,
    #[error("the resultant vanishes identically")]
    ZeroResultant,
    #[error("eigenvalue computation failed")]
    Eigen,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
