//! From left eigenvectors to candidate points, and the acceptance test.

use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::assembly::{MonomialBasis, ResultantMatrix, SystemSpec};
use crate::eigensolver::EigenPair;
use crate::lattice::LatticePoint;

/// Default threshold below which an eigenvector entry counts as zero.
pub const VANISH_TOL: f64 = 1e-10;
/// Default `ε` of the acceptance rule.
pub const DEFAULT_EPSILON: f64 = 1e-8;
/// Relative max-norm distance under which accepted candidates are merged.
pub const DEDUP_TOL: f64 = 1e-6;
/// Candidates within this factor of the acceptance threshold get polished.
pub const POLISH_WINDOW: f64 = 1e3;

/// Alternatives kept per coordinate.
const MAX_RECIPES: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtractError {
    #[error("basis lacks the origin monomial")]
    MissingOrigin,
    #[error("coordinate x{} cannot be recovered from the basis monomials", .0 + 1)]
    CoordinateUnrecoverable(usize),
    #[error("eigenvector vanishes at the origin monomial")]
    VanishingLeadCoordinate,
    #[error("every recipe for x{} touches a vanishing eigenvector entry", .0 + 1)]
    VanishingEntries(usize),
}

/// `x^{Σ c_i m_i} = x_j`: a product of eigenvector entries with integer powers.
pub type Recipe = Vec<(usize, i64)>;

/// Per coordinate, alternative recipes in order of preference.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtractionPlan {
    recipes: Vec<Vec<Recipe>>,
}

impl ExtractionPlan {
    pub fn dim(&self) -> usize {
        self.recipes.len()
    }

    pub fn recipes(&self, j: usize) -> &[Recipe] {
        &self.recipes[j]
    }

    /// Checks `Σ c_i m_i = e_j` exactly for every recipe.
    pub fn verify(&self, basis: &MonomialBasis) -> bool {
        let n = self.recipes.len();
        self.recipes.iter().enumerate().all(|(j, alts)| {
            alts.iter().all(|r| {
                let mut acc = vec![0i128; n];
                for &(i, c) in r {
                    for (a, &m) in acc.iter_mut().zip(basis.points()[i].coords()) {
                        *a += c as i128 * m as i128;
                    }
                }
                acc.iter().enumerate().all(|(t, &a)| a == (t == j) as i128)
            })
        })
    }
}

/// Recipes for each unit vector: direct lookup, then differences of two
/// basis points, then an integer combination from row-style Hermite reduction.
pub fn build_extraction_plan(basis: &MonomialBasis) -> Result<ExtractionPlan, ExtractError> {
    let pts = basis.points();
    if pts.first().map(|p| !p.is_origin()).unwrap_or(true) {
        return Err(ExtractError::MissingOrigin);
    }
    let n = pts[0].dim();
    let mut recipes = vec![Vec::new(); n];
    for (j, alts) in recipes.iter_mut().enumerate() {
        let e = LatticePoint::unit(n, j);
        if let Some(i) = basis.index_of(&e) {
            alts.push(vec![(i, 1)]);
        }
        for (b, mb) in pts.iter().enumerate().skip(1) {
            if alts.len() >= MAX_RECIPES {
                break;
            }
            if let Some(a) = basis.index_of(&(mb + &e)) {
                if b != 0 && a != 0 {
                    alts.push(vec![(a, 1), (b, -1)]);
                }
            }
        }
    }
    if recipes.iter().any(Vec::is_empty) {
        let echelon = HermiteRows::new(pts);
        for (j, alts) in recipes.iter_mut().enumerate() {
            if alts.is_empty() {
                alts.push(echelon.express(&LatticePoint::unit(n, j)).ok_or(ExtractError::CoordinateUnrecoverable(j))?);
            }
        }
    }
    Ok(ExtractionPlan { recipes })
}

/// Integer row echelon form of the nonzero basis points, each row carrying
/// its combination of original indices.
struct HermiteRows {
    rows: Vec<(usize, Vec<i128>, BTreeMap<usize, i128>)>,
}

impl HermiteRows {
    fn new(pts: &[LatticePoint]) -> Self {
        let n = pts[0].dim();
        let mut pool: Vec<(Vec<i128>, BTreeMap<usize, i128>)> = pts
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_origin())
            .map(|(i, p)| (p.coords().iter().map(|&x| x as i128).collect(), BTreeMap::from([(i, 1)])))
            .collect();
        let mut rows = Vec::new();
        for col in 0..n {
            while let Some(piv) = (0..pool.len()).filter(|&r| pool[r].0[col] != 0).min_by_key(|&r| pool[r].0[col].abs())
            {
                let mut others = false;
                for r in 0..pool.len() {
                    if r == piv || pool[r].0[col] == 0 {
                        continue;
                    }
                    let q = pool[r].0[col].div_euclid(pool[piv].0[col]);
                    let (pv, pc) = pool[piv].clone();
                    for (a, b) in pool[r].0.iter_mut().zip(&pv) {
                        *a -= q * b;
                    }
                    for (i, c) in pc {
                        let e = pool[r].1.entry(i).or_insert(0);
                        *e -= q * c;
                        if *e == 0 {
                            pool[r].1.remove(&i);
                        }
                    }
                    others |= pool[r].0[col] != 0;
                }
                if !others {
                    let row = pool.swap_remove(piv);
                    rows.push((col, row.0, row.1));
                    break;
                }
            }
            pool.retain(|(v, _)| v.iter().any(|&x| x != 0));
        }
        HermiteRows { rows }
    }

    fn express(&self, target: &LatticePoint) -> Option<Recipe> {
        let mut t: Vec<i128> = target.coords().iter().map(|&x| x as i128).collect();
        let mut combo: BTreeMap<usize, i128> = BTreeMap::new();
        for (col, v, c) in &self.rows {
            if t[*col] % v[*col] != 0 {
                return None;
            }
            let k = t[*col] / v[*col];
            for (a, b) in t.iter_mut().zip(v) {
                *a -= k * b;
            }
            for (&i, &x) in c {
                *combo.entry(i).or_insert(0) += k * x;
            }
        }
        if t.iter().any(|&x| x != 0) {
            return None;
        }
        combo.into_iter().filter(|&(_, c)| c != 0).map(|(i, c)| i64::try_from(c).ok().map(|c| (i, c))).collect()
    }
}

/// Why a candidate was not accepted.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    /// Some residual is at or above `(K+1)ε`.
    Residual,
    /// The point has a zero coordinate.
    ZeroCoordinate,
    /// Imaginary parts too large for a real critical point.
    NotReal,
}

/// Candidate point extracted from one eigenpair.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSolution {
    pub point: Vec<Complex64>,
    pub eigenvalue: Complex64,
    /// `|f_i(x)|` for `i = 1..k`.
    pub equation_residuals: Vec<f64>,
    /// `|f0(x) − λ|`.
    pub aux_residual: f64,
    /// `(K+1)ε` used by the last identification; zero before it.
    pub threshold: f64,
    pub accepted: bool,
    pub reject_reason: Option<RejectReason>,
    /// `w / w[origin]`.
    pub source_vector: Vec<Complex64>,
}

impl CandidateSolution {
    pub fn max_residual(&self) -> f64 {
        self.equation_residuals.iter().copied().fold(self.aux_residual, f64::max)
    }

    pub fn max_equation_residual(&self) -> f64 {
        self.equation_residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn apply_recipe(v: &[Complex64], recipe: &Recipe, vanish_tol: f64) -> Option<Complex64> {
    let mut x = Complex64::new(1.0, 0.0);
    for &(i, c) in recipe {
        if v[i].norm() <= vanish_tol {
            return None;
        }
        x *= v[i].powi(c as i32);
    }
    Some(x)
}

/// Normalizes `w` by its origin entry and reads off coordinates; residuals
/// are left empty until [`identify`].
pub fn extract(pair: &EigenPair, plan: &ExtractionPlan, vanish_tol: f64) -> Result<CandidateSolution, ExtractError> {
    let w = &pair.left_vector;
    let scale = w.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if w.is_empty() || w[0].norm() <= vanish_tol * scale.max(f64::MIN_POSITIVE) {
        return Err(ExtractError::VanishingLeadCoordinate);
    }
    let v: Vec<Complex64> = w.iter().map(|z| z / w[0]).collect();
    let point = (0..plan.dim())
        .map(|j| {
            plan.recipes[j]
                .iter()
                .find_map(|r| apply_recipe(&v, r, vanish_tol))
                .ok_or(ExtractError::VanishingEntries(j))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CandidateSolution {
        point,
        eigenvalue: pair.value,
        equation_residuals: Vec::new(),
        aux_residual: f64::INFINITY,
        threshold: 0.0,
        accepted: false,
        reject_reason: None,
        source_vector: v,
    })
}

fn residuals(c: &CandidateSolution, spec: &SystemSpec) -> (Vec<f64>, f64) {
    let eq = spec.equations().iter().map(|f| f.evaluate(&c.point).map(|z| z.norm()).unwrap_or(f64::INFINITY)).collect();
    let aux = spec.aux().evaluate(&c.point).map(|z| (z - c.eigenvalue).norm()).unwrap_or(f64::INFINITY);
    (eq, aux)
}

/// The acceptance rule: with `K = ‖M‖₁`, accept iff every `|f_i(x)|` and
/// `|f0(x) − λ|` is below `(K+1)ε`.
pub fn identify(mut c: CandidateSolution, spec: &SystemSpec, m: &ResultantMatrix, epsilon: f64) -> CandidateSolution {
    let (eq, aux) = residuals(&c, spec);
    c.equation_residuals = eq;
    c.aux_residual = aux;
    c.threshold = (m.one_norm() + 1.0) * epsilon;
    if c.point.iter().any(|z| *z == Complex64::new(0.0, 0.0)) {
        c.accepted = false;
        c.reject_reason = Some(RejectReason::ZeroCoordinate);
    } else if c.max_residual() < c.threshold {
        c.accepted = true;
        c.reject_reason = None;
    } else {
        c.accepted = false;
        c.reject_reason = Some(RejectReason::Residual);
    }
    c
}

/// Damped Gauss–Newton on `(f1..fk)` with minimum-norm least-squares steps.
/// Returns the input unchanged unless the largest equation residual drops.
pub fn polish(c: &CandidateSolution, spec: &SystemSpec, max_iters: usize) -> CandidateSolution {
    let eqs = spec.equations();
    let n = spec.dim();
    let eval = |x: &[Complex64]| -> Option<Vec<Complex64>> { eqs.iter().map(|f| f.evaluate(x).ok()).collect() };
    let max_abs = |v: &[Complex64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let Some(mut fx) = eval(&c.point) else { return c.clone() };
    let mut x = c.point.clone();
    let start = max_abs(&fx);
    for _ in 0..max_iters {
        let cur = max_abs(&fx);
        if cur == 0.0 {
            break;
        }
        let Some(jac) = eqs.iter().map(|f| f.gradient(&x).ok()).collect::<Option<Vec<_>>>() else { break };
        let j = Mat::from_fn(eqs.len(), n, |r, s| jac[r][s]);
        let Ok(svd) = j.thin_svd() else { break };
        let s = svd.S().column_vector();
        let smax = s.iter().map(|z| z.re).fold(0.0, f64::max);
        let rhs = Mat::from_fn(eqs.len(), 1, |r, _| fx[r]);
        let mut t = svd.U().adjoint() * &rhs;
        for i in 0..t.nrows() {
            let si = s[i].re;
            t[(i, 0)] = if si > smax * 1e-12 { t[(i, 0)] / si } else { Complex64::new(0.0, 0.0) };
        }
        let step = svd.V() * &t;
        let mut alpha = 1.0;
        let mut improved = None;
        for _ in 0..20 {
            let y: Vec<Complex64> = (0..n).map(|i| x[i] - step[(i, 0)] * alpha).collect();
            if let Some(fy) = eval(&y) {
                if max_abs(&fy) < cur {
                    improved = Some((y, fy));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match improved {
            Some((y, fy)) => {
                x = y;
                fx = fy;
            }
            None => break,
        }
    }
    if max_abs(&fx) >= start {
        return c.clone();
    }
    let mut out = c.clone();
    out.point = x;
    let (eq, aux) = residuals(&out, spec);
    out.equation_residuals = eq;
    out.aux_residual = aux;
    out
}

/// Merges candidates whose points agree to `tol` in relative max-norm,
/// keeping the one with the smallest largest residual. Order of first
/// occurrence is preserved.
pub fn dedup(cands: Vec<CandidateSolution>, tol: f64) -> Vec<CandidateSolution> {
    let mut out: Vec<CandidateSolution> = Vec::with_capacity(cands.len());
    for c in cands {
        let close = out.iter().position(|o| {
            let scale = o.point.iter().chain(&c.point).map(|z| z.norm()).fold(1.0, f64::max);
            o.point.iter().zip(&c.point).all(|(a, b)| (a - b).norm() <= tol * scale)
        });
        match close {
            Some(i) if c.max_residual() < out[i].max_residual() => out[i] = c,
            Some(_) => {}
            None => out.push(c),
        }
    }
    out
}
