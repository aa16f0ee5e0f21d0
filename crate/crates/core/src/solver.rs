//! The whole pipeline: bases, matrix, reduction, eigenvectors, candidates.

use std::time::{Duration, Instant};

use faer::Mat;
use num_complex::Complex64;
use thiserror::Error;

use crate::assembly::{
    assemble, build_bases, normalize_spec, AssemblyError, SystemSpec, DEFAULT_BUDGET, DEFAULT_MAX_ENTRIES,
};
use crate::eigensolver::{left_eigen, reduce, EigenError, EigenPair, MultiplicityWarning, TOL_EIG};
use crate::extractor::{
    build_extraction_plan, dedup, extract, identify, polish, CandidateSolution, ExtractError, DEDUP_TOL,
    DEFAULT_EPSILON, POLISH_WINDOW, VANISH_TOL,
};
use crate::lattice::LatticePoint;
use crate::laurent::{CoeffStyle, LaurentError, LaurentPoly};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

impl SolveError {
    pub fn is_rank_failure(&self) -> bool {
        matches!(self, SolveError::Eigen(EigenError::RankDeficient { .. }))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    /// `ε` of the acceptance rule.
    pub epsilon: f64,
    /// Cap on lattice points per basis.
    pub budget: usize,
    /// Cap on `rows × columns` of the dense matrix.
    pub max_entries: usize,
    /// Singular value cutoff for `rank(M22)`; `None` for the default.
    pub tol_rank: Option<f64>,
    pub tol_eig: f64,
    pub vanish_tol: f64,
    /// Newton steps for accepted and near-accepted candidates; 0 disables.
    pub polish_iters: usize,
    /// Candidates with residuals below `polish_window · (K+1)ε` are polished.
    pub polish_window: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            epsilon: DEFAULT_EPSILON,
            budget: DEFAULT_BUDGET,
            max_entries: DEFAULT_MAX_ENTRIES,
            tol_rank: None,
            tol_eig: TOL_EIG,
            vanish_tol: VANISH_TOL,
            polish_iters: 8,
            polish_window: POLISH_WINDOW,
        }
    }
}

/// Wall-clock time per pipeline step.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepTimings {
    pub bases: Duration,
    pub assemble: Duration,
    /// Block split, `F`, and `R`.
    pub reduce: Duration,
    pub eigen: Duration,
    /// Extraction, identification, polishing.
    pub extract: Duration,
}

impl StepTimings {
    /// Steps 1–4 of the algorithm: bases through the linear solve.
    pub fn steps_1_to_4(&self) -> Duration {
        self.bases + self.assemble + self.reduce
    }

    pub fn total(&self) -> Duration {
        self.steps_1_to_4() + self.eigen + self.extract
    }
}

/// An eigenpair that produced no candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct SkippedPair {
    pub eigenvalue: Complex64,
    pub reason: ExtractError,
}

/// Everything a solve produced.
#[derive(Clone, Debug)]
pub struct Solution {
    /// Accepted, deduplicated, in descending `|λ|`.
    pub accepted: Vec<CandidateSolution>,
    pub rejected: Vec<CandidateSolution>,
    pub skipped: Vec<SkippedPair>,
    pub eigenpairs: Vec<EigenPair>,
    pub warnings: Vec<MultiplicityWarning>,
    pub p: usize,
    pub q: usize,
    pub p_i: Vec<usize>,
    pub rank22: usize,
    /// `‖M22 F + M21‖_F`.
    pub solve_residual: f64,
    /// `σ_max / σ_q` of `M22`.
    pub condition22: f64,
    /// `K = ‖M‖₁`.
    pub one_norm: f64,
    /// `(K+1)ε`.
    pub threshold: f64,
    pub reduced: Mat<Complex64>,
    pub timings: StepTimings,
}

/// Runs every step on a prepared system.
pub fn solve_spec(spec: &SystemSpec, opts: &SolveOptions) -> Result<Solution, SolveError> {
    let mut timings = StepTimings::default();
    let t = Instant::now();
    let bases = build_bases(spec, opts.budget)?;
    timings.bases = t.elapsed();
    let (rows, cols) = (bases.e.len(), bases.p() + bases.p_i().iter().sum::<usize>());
    if rows.saturating_mul(cols) > opts.max_entries {
        return Err(AssemblyError::MatrixTooLarge { rows, cols, limit: opts.max_entries }.into());
    }

    let t = Instant::now();
    let m = assemble(spec, &bases)?;
    timings.assemble = t.elapsed();

    let t = Instant::now();
    let red = reduce(&m, opts.tol_rank)?;
    timings.reduce = t.elapsed();

    let t = Instant::now();
    let (eigenpairs, warnings) = left_eigen(red.r.as_ref(), opts.tol_eig)?;
    timings.eigen = t.elapsed();

    let t = Instant::now();
    let plan = build_extraction_plan(&bases.b0)?;
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    let mut skipped = Vec::new();
    for pair in &eigenpairs {
        let cand = match extract(pair, &plan, opts.vanish_tol) {
            Ok(c) => identify(c, spec, &m, opts.epsilon),
            Err(reason) => {
                skipped.push(SkippedPair { eigenvalue: pair.value, reason });
                continue;
            }
        };
        let cand = refine(cand, spec, &m, opts);
        if cand.accepted {
            accepted.push(cand);
        } else {
            rejected.push(cand);
        }
    }
    let accepted = dedup(accepted, DEDUP_TOL);
    timings.extract = t.elapsed();

    Ok(Solution {
        accepted,
        rejected,
        skipped,
        eigenpairs,
        warnings,
        p: bases.p(),
        q: bases.q(),
        p_i: bases.p_i(),
        rank22: red.rank22,
        solve_residual: red.residual,
        condition22: red.condition(),
        one_norm: m.one_norm(),
        threshold: (m.one_norm() + 1.0) * opts.epsilon,
        reduced: red.r,
        timings,
    })
}

/// Polishes candidates within reach of the threshold; keeps the polished
/// point only if identification does not get worse.
fn refine(
    cand: CandidateSolution,
    spec: &SystemSpec,
    m: &crate::assembly::ResultantMatrix,
    opts: &SolveOptions,
) -> CandidateSolution {
    // NaN residuals are never polished.
    let in_window = cand.max_residual() < opts.polish_window * cand.threshold;
    if opts.polish_iters == 0 || !in_window {
        return cand;
    }
    let polished = identify(polish(&cand, spec, opts.polish_iters), spec, m, opts.epsilon);
    if polished.accepted || !cand.accepted {
        polished
    } else {
        cand
    }
}

/// Seeded generic `f0` on `{0, e1, …, en}` with unit-modulus coefficients.
pub fn default_aux(dim: usize, seed: u64) -> LaurentPoly {
    let mut support = vec![LatticePoint::origin(dim)];
    support.extend((0..dim).map(|j| LatticePoint::unit(dim, j)));
    LaurentPoly::random_generic(&support, seed, CoeffStyle::UnitComplex).expect("nonempty support")
}

/// Normalizes `f1..fk` (and `f0`, generated from `seed` when absent) and solves.
pub fn solve_system(
    equations: Vec<LaurentPoly>,
    aux: Option<LaurentPoly>,
    seed: u64,
    opts: &SolveOptions,
) -> Result<(SystemSpec, Solution), SolveError> {
    let dim = equations.first().ok_or(AssemblyError::NoEquations)?.dim();
    let aux = aux.unwrap_or_else(|| default_aux(dim, seed));
    let spec = normalize_spec(aux, equations)?;
    let sol = solve_spec(&spec, opts)?;
    Ok((spec, sol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::left_residual;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn poly(t: &[(&[i64], f64)]) -> LaurentPoly {
        LaurentPoly::from_terms(2, t.iter().map(|(v, k)| (LatticePoint::new(v.to_vec()), c(*k)))).unwrap()
    }

    fn intro() -> Vec<LaurentPoly> {
        vec![poly(&[(&[0, 0], 1.0), (&[1, 1], -1.0)]), poly(&[(&[0, 0], 1.0), (&[0, 1], -1.0)])]
    }

    #[test]
    fn intro_example_end_to_end() {
        let (spec, sol) = solve_system(intro(), None, 11, &SolveOptions::default()).unwrap();
        assert_eq!(sol.accepted.len(), 1);
        let x = &sol.accepted[0];
        assert!(x.point.iter().all(|z| (z - c(1.0)).norm() < 1e-8));
        let f0 = spec.aux().evaluate(&[c(1.0), c(1.0)]).unwrap();
        assert!((x.eigenvalue - f0).norm() < 1e-8);
        assert_eq!(sol.rank22, sol.q);
        for pair in &sol.eigenpairs {
            let r = sol.reduced.as_ref();
            assert!(left_residual(r, pair.value, &pair.left_vector) <= pair.residual * 1.000001 + 1e-300);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let (_, a) = solve_system(intro(), None, 5, &SolveOptions::default()).unwrap();
        let (_, b) = solve_system(intro(), None, 5, &SolveOptions::default()).unwrap();
        assert_eq!(a.accepted, b.accepted);
    }

    #[test]
    fn polishing_can_be_disabled() {
        let opts = SolveOptions { polish_iters: 0, ..SolveOptions::default() };
        let (_, sol) = solve_system(intro(), None, 3, &opts).unwrap();
        assert_eq!(sol.accepted.len(), 1);
    }

    #[test]
    fn univariate_quadratic() {
        // x^2 − 3x + 2 = (x − 1)(x − 2)
        let f = LaurentPoly::from_terms(
            1,
            [(vec![0], 2.0), (vec![1], -3.0), (vec![2], 1.0)].map(|(v, k)| (LatticePoint::new(v), c(k))),
        )
        .unwrap();
        let (_, sol) = solve_system(vec![f], None, 1, &SolveOptions::default()).unwrap();
        let mut roots: Vec<f64> = sol.accepted.iter().map(|x| x.point[0].re).collect();
        roots.sort_by(f64::total_cmp);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 1.0).abs() < 1e-10 && (roots[1] - 2.0).abs() < 1e-10);
    }
}
