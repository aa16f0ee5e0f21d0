//! Schur reduction `R = M11 + M12 F` with `M22 F = −M21`, and left eigenpairs of `R`.

use faer::{Mat, MatRef};
use num_complex::Complex64;
use thiserror::Error;

use crate::assembly::{block_split, ResultantMatrix};

/// Residual bound for `M22 F + M21`, relative to `max(1, ‖M21‖_F)`.
pub const TOL_LIN: f64 = 1e-8;
/// Residual bound for `wR − λw`, relative to `‖R‖_∞`.
pub const TOL_EIG: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error(
        "M22 has numerical rank {rank} < q = {q}; the system may have infinitely many or multiple roots, \
         or the declared polytopes need enlarging"
    )]
    RankDeficient { rank: usize, q: usize },
    #[error("linear solve residual {residual:e} exceeds {bound:e}")]
    InaccurateSolve { residual: f64, bound: f64 },
    #[error("singular value decomposition did not converge")]
    Svd,
    #[error("eigendecomposition did not converge")]
    Evd,
    #[error("matrix is not square ({0}×{1})")]
    NotSquare(usize, usize),
}

/// Outcome of eliminating the `M22` block.
#[derive(Clone, Debug)]
pub struct SchurReduction {
    /// `(Σpi) × p`.
    pub f: Mat<Complex64>,
    /// `p × p`.
    pub r: Mat<Complex64>,
    pub rank22: usize,
    /// `‖M22 F + M21‖_F`.
    pub residual: f64,
    /// Largest and `q`-th singular values of `M22`.
    pub sigma_max: f64,
    pub sigma_min: f64,
}

impl SchurReduction {
    /// `σ_max / σ_q` of `M22`; a diagnostic only.
    pub fn condition(&self) -> f64 {
        self.sigma_max / self.sigma_min
    }
}

/// Solution of `M22 F = −M21` with its diagnostics.
#[derive(Clone, Debug)]
pub struct FSolution {
    pub f: Mat<Complex64>,
    pub rank22: usize,
    pub residual: f64,
    pub sigma_max: f64,
    pub sigma_min: f64,
}

/// One left eigenpair `wR = λw`, `‖w‖₂ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    pub left_vector: Vec<Complex64>,
    /// `‖wR − λw‖_∞`, recomputed from `R`.
    pub residual: f64,
}

/// An eigenpair dropped because its residual exceeded the bound, which happens
/// for defective (repeated) eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityWarning {
    pub value: Complex64,
    pub residual: f64,
    pub bound: f64,
}

pub(crate) fn frobenius(m: MatRef<'_, Complex64>) -> f64 {
    let mut s = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            s += m[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

fn inf_norm(m: MatRef<'_, Complex64>) -> f64 {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Minimum-norm solution of `M22 F = −M21` through the SVD of `M22`.
///
/// Singular values at or below `tol_rank` count as zero; `None` selects
/// `max(q, Σpi) · ε_mach · σ_max`. The numerical rank must equal `q`.
pub fn solve_f(
    m21: MatRef<'_, Complex64>,
    m22: MatRef<'_, Complex64>,
    tol_rank: Option<f64>,
) -> Result<FSolution, EigenError> {
    let q = m22.nrows();
    let svd = m22.thin_svd().map_err(|_| EigenError::Svd)?;
    let s: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
    let sigma_max = s.first().copied().unwrap_or(0.0);
    let tol = tol_rank.unwrap_or(q.max(m22.ncols()) as f64 * f64::EPSILON * sigma_max);
    let rank = s.iter().filter(|&&x| x > tol).count();
    if rank < q {
        return Err(EigenError::RankDeficient { rank, q });
    }
    let (u, v) = (svd.U(), svd.V());
    // F = −V Σ⁻¹ Uᴴ M21
    let mut t = u.adjoint() * m21;
    for i in 0..q {
        let inv = 1.0 / s[i];
        for j in 0..t.ncols() {
            t[(i, j)] *= -inv;
        }
    }
    let f = v * &t;
    let check = m22 * &f + m21;
    let residual = frobenius(check.as_ref());
    let bound = TOL_LIN * frobenius(m21).max(1.0);
    if residual > bound {
        return Err(EigenError::InaccurateSolve { residual, bound });
    }
    Ok(FSolution { f, rank22: rank, residual, sigma_max, sigma_min: s[q - 1] })
}

/// `M11 + M12 F`.
pub fn reduced_matrix(
    m11: MatRef<'_, Complex64>,
    m12: MatRef<'_, Complex64>,
    f: MatRef<'_, Complex64>,
) -> Mat<Complex64> {
    m11 + m12 * f
}

/// Block split, `F`, and `R` in one call.
pub fn reduce(m: &ResultantMatrix, tol_rank: Option<f64>) -> Result<SchurReduction, EigenError> {
    let b = block_split(m);
    let FSolution { f, rank22, residual, sigma_max, sigma_min } = solve_f(b.m21, b.m22, tol_rank)?;
    let r = reduced_matrix(b.m11, b.m12, f.as_ref());
    Ok(SchurReduction { f, r, rank22, residual, sigma_max, sigma_min })
}

/// `‖wR − λw‖_∞`.
pub fn left_residual(r: MatRef<'_, Complex64>, value: Complex64, w: &[Complex64]) -> f64 {
    (0..r.ncols())
        .map(|j| {
            let wr: Complex64 = (0..r.nrows()).map(|i| w[i] * r[(i, j)]).sum();
            (wr - value * w[j]).norm()
        })
        .fold(0.0, f64::max)
}

/// Left eigenpairs of `R` from the eigendecomposition of `Rᵀ`, sorted by
/// descending `|λ|`. Pairs with residual above `tol_eig · ‖R‖_∞` are returned
/// as warnings instead.
pub fn left_eigen(
    r: MatRef<'_, Complex64>,
    tol_eig: f64,
) -> Result<(Vec<EigenPair>, Vec<MultiplicityWarning>), EigenError> {
    if r.nrows() != r.ncols() {
        return Err(EigenError::NotSquare(r.nrows(), r.ncols()));
    }
    let n = r.nrows();
    let evd = r.transpose().eigen().map_err(|_| EigenError::Evd)?;
    let (u, s) = (evd.U(), evd.S());
    let bound = tol_eig * inf_norm(r);
    let mut pairs = Vec::with_capacity(n);
    let mut warnings = Vec::new();
    for k in 0..n {
        let value = s.column_vector()[k];
        let mut w: Vec<Complex64> = (0..n).map(|i| u[(i, k)]).collect();
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            w.iter_mut().for_each(|z| *z /= norm);
        }
        let residual = left_residual(r, value, &w);
        if residual <= bound && norm > 0.0 {
            pairs.push(EigenPair { value, left_vector: w, residual });
        } else {
            warnings.push(MultiplicityWarning { value, residual, bound });
        }
    }
    pairs.sort_by(|a, b| b.value.norm().total_cmp(&a.value.norm()));
    Ok((pairs, warnings))
}
