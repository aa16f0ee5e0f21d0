//! Monomial bases and the matrix of `Ψ(g0, …, gk) = f0 g0 + Σ fi gi`.

use std::collections::HashMap;
use std::io::{self, Write};

use faer::{Mat, MatRef};
use num_complex::Complex64;
use thiserror::Error;

use crate::lattice::{
    convex_hull, dilate, is_normal, lattice_points_bounded, minkowski_sum, LatticeError, LatticePoint, Polytope,
};
use crate::laurent::{LaurentError, LaurentPoly};

/// Default cap on the number of lattice points in any basis.
pub const DEFAULT_BUDGET: usize = 20_000;

/// Default cap on `rows × columns` of the dense matrix (about 320 MB).
pub const DEFAULT_MAX_ENTRIES: usize = 20_000_000;

/// Environment variable capping the threads used for column assembly.
pub const THREADS_ENV: &str = "SPARSE_EIGSOLVE_THREADS";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssemblyError {
    #[error("at least one equation is required")]
    NoEquations,
    #[error("auxiliary polynomial f0 is constant")]
    ConstantAux,
    #[error("equation {0} is the zero polynomial")]
    ZeroEquation(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} declared polytopes, got {found}")]
    PolytopeCount { expected: usize, found: usize },
    #[error("declared polytope A{0} does not contain the Newton polytope")]
    SupportOutsidePolytope(usize),
    #[error("declared polytope A{0} does not contain the origin")]
    OriginOutsidePolytope(usize),
    #[error("explicit bases are inconsistent: {0}")]
    InconsistentBases(String),
    #[error("basis {basis} exceeds the budget of {budget} lattice points")]
    BudgetExceeded { basis: String, budget: usize },
    #[error("a {rows}×{cols} matrix exceeds the cap of {limit} entries")]
    MatrixTooLarge { rows: usize, cols: usize, limit: usize },
    #[error("the split has no second block (q = 0)")]
    EmptySecondBlock,
    #[error("product monomial {monomial:?} of equation {equation} falls outside E")]
    OutsideE { equation: usize, monomial: LatticePoint },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// How the multiplier and row bases are derived from the declared polytopes.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisScheme {
    /// `B0 = A1+…+Ak`, `Bi = A0+…+Âi+…+Ak`, `E = A0+…+Ak`.
    Minkowski,
    /// Caller-supplied polytopes. They must satisfy `B0 ⊆ E`, `A0 + B0 ⊆ E`
    /// and `Ai + Bi ⊆ E`, and `B0` must contain the origin.
    Explicit { b0: Polytope, bi: Vec<Polytope>, e: Polytope },
}

/// Equations `f1..fk`, the auxiliary `f0`, and declared polytopes `A0..Ak`.
#[derive(Clone, Debug)]
pub struct SystemSpec {
    dim: usize,
    equations: Vec<LaurentPoly>,
    aux: LaurentPoly,
    polytopes: Vec<Polytope>,
    scale_factors: Vec<i64>,
    scheme: BasisScheme,
}

impl SystemSpec {
    /// Validates and packages a system. `polytopes[0]` belongs to `aux`.
    pub fn new(aux: LaurentPoly, equations: Vec<LaurentPoly>, polytopes: Vec<Polytope>) -> Result<Self, AssemblyError> {
        let dim = aux.dim();
        if equations.is_empty() {
            return Err(AssemblyError::NoEquations);
        }
        if aux.is_zero() || aux.is_constant() {
            return Err(AssemblyError::ConstantAux);
        }
        if polytopes.len() != equations.len() + 1 {
            return Err(AssemblyError::PolytopeCount { expected: equations.len() + 1, found: polytopes.len() });
        }
        let origin = LatticePoint::origin(dim);
        for (i, (f, a)) in std::iter::once(&aux).chain(&equations).zip(&polytopes).enumerate() {
            if f.dim() != dim {
                return Err(AssemblyError::DimensionMismatch { expected: dim, found: f.dim() });
            }
            if a.dim() != dim {
                return Err(AssemblyError::DimensionMismatch { expected: dim, found: a.dim() });
            }
            if f.is_zero() {
                return Err(AssemblyError::ZeroEquation(i));
            }
            if !f.terms().all(|(v, _)| a.contains(v)) {
                return Err(AssemblyError::SupportOutsidePolytope(i));
            }
            if !a.contains(&origin) {
                return Err(AssemblyError::OriginOutsidePolytope(i));
            }
        }
        let scale_factors = vec![1; polytopes.len()];
        Ok(SystemSpec { dim, equations, aux, polytopes, scale_factors, scheme: BasisScheme::Minkowski })
    }

    /// Replaces the Minkowski bases by explicit ones after checking the
    /// inclusions that make every column land inside `E`.
    pub fn with_explicit_bases(mut self, b0: Polytope, bi: Vec<Polytope>, e: Polytope) -> Result<Self, AssemblyError> {
        let bad = |msg: &str| Err(AssemblyError::InconsistentBases(msg.to_string()));
        if bi.len() != self.equations.len() {
            return bad("one multiplier polytope per equation is required");
        }
        if std::iter::once(&b0).chain(&bi).chain(std::iter::once(&e)).any(|p| p.dim() != self.dim) {
            return bad("dimension mismatch");
        }
        if !b0.contains(&LatticePoint::origin(self.dim)) {
            return bad("B0 must contain the origin");
        }
        if !e.contains_polytope(&b0) {
            return bad("B0 must lie in E");
        }
        if !e.contains_polytope(&minkowski_sum(&self.polytopes[0], &b0)?) {
            return bad("A0 + B0 must lie in E");
        }
        for (i, b) in bi.iter().enumerate() {
            if !e.contains_polytope(&minkowski_sum(&self.polytopes[i + 1], b)?) {
                return Err(AssemblyError::InconsistentBases(format!("A{} + B{} must lie in E", i + 1, i + 1)));
            }
        }
        self.scheme = BasisScheme::Explicit { b0, bi, e };
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `f1..fk`.
    pub fn equations(&self) -> &[LaurentPoly] {
        &self.equations
    }

    /// `f0`.
    pub fn aux(&self) -> &LaurentPoly {
        &self.aux
    }

    /// `A0..Ak`.
    pub fn polytopes(&self) -> &[Polytope] {
        &self.polytopes
    }

    /// Dilation factor applied to each declared polytope, `A0` first.
    pub fn scale_factors(&self) -> &[i64] {
        &self.scale_factors
    }

    pub fn scheme(&self) -> &BasisScheme {
        &self.scheme
    }

    /// Same system with a different `f0`; declared `A0` is rebuilt from it.
    pub fn with_aux(&self, aux: LaurentPoly) -> Result<Self, AssemblyError> {
        let mut polytopes = self.polytopes.clone();
        polytopes[0] = aux_polytope(&aux)?;
        let mut s = SystemSpec::new(aux, self.equations.clone(), polytopes)?;
        s.scheme = self.scheme.clone();
        Ok(s)
    }
}

/// `conv(supp f0 ∪ {0})`.
fn aux_polytope(aux: &LaurentPoly) -> Result<Polytope, AssemblyError> {
    let mut pts = aux.support();
    pts.push(LatticePoint::origin(aux.dim()));
    Ok(convex_hull(&pts)?)
}

/// Shifts each `fi` (`i ≥ 1`) to the origin and declares `Ai = N(fi)`, or
/// `(n−1)·N(fi)` when the bounded normality test fails.
///
/// `f0` is not shifted, so eigenvalues stay equal to `f0(ξ)`; its declared
/// polytope is `conv(supp f0 ∪ {0})` under the same normality rule.
pub fn normalize_spec(aux: LaurentPoly, equations: Vec<LaurentPoly>) -> Result<SystemSpec, AssemblyError> {
    let dim = aux.dim();
    if equations.is_empty() {
        return Err(AssemblyError::NoEquations);
    }
    if aux.is_zero() || aux.is_constant() {
        return Err(AssemblyError::ConstantAux);
    }
    let mut shifted = Vec::with_capacity(equations.len());
    for (i, f) in equations.iter().enumerate() {
        if f.dim() != dim {
            return Err(AssemblyError::DimensionMismatch { expected: dim, found: f.dim() });
        }
        if f.is_zero() {
            return Err(AssemblyError::ZeroEquation(i + 1));
        }
        shifted.push(f.shift_to_origin()?);
    }
    let kmax = dim.max(2) as u32;
    let factor = dim.saturating_sub(1).max(1) as i64;
    let mut polytopes = Vec::with_capacity(shifted.len() + 1);
    let mut scale_factors = Vec::with_capacity(shifted.len() + 1);
    let newton = std::iter::once(aux_polytope(&aux)).chain(shifted.iter().map(|f| Ok(f.newton_polytope()?)));
    for n in newton {
        let n = n?;
        if is_normal(&n, kmax) {
            polytopes.push(n);
            scale_factors.push(1);
        } else {
            polytopes.push(dilate(&n, factor)?);
            scale_factors.push(factor);
        }
    }
    let mut spec = SystemSpec::new(aux, shifted, polytopes)?;
    spec.scale_factors = scale_factors;
    Ok(spec)
}

/// Ordered lattice points with an index. The origin, when present, comes first;
/// the rest follow in lexicographic order unless a prefix was imposed.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialBasis {
    points: Vec<LatticePoint>,
    index: HashMap<LatticePoint, usize>,
}

impl MonomialBasis {
    fn from_ordered(points: Vec<LatticePoint>) -> Self {
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        MonomialBasis { points, index }
    }

    /// Origin first, remaining points lexicographically.
    pub fn new(mut points: Vec<LatticePoint>) -> Self {
        points.sort();
        points.dedup();
        if let Some(pos) = points.iter().position(|p| p.is_origin()) {
            let o = points.remove(pos);
            points.insert(0, o);
        }
        Self::from_ordered(points)
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.index.get(p).copied()
    }
}

/// Row basis `E` (with `B0` as a prefix), `B0`, and the multiplier bases `Bi`.
#[derive(Clone, Debug)]
pub struct BasisPair {
    pub e: MonomialBasis,
    pub b0: MonomialBasis,
    pub bi: Vec<MonomialBasis>,
}

impl BasisPair {
    pub fn p(&self) -> usize {
        self.b0.len()
    }

    pub fn q(&self) -> usize {
        self.e.len() - self.b0.len()
    }

    pub fn p_i(&self) -> Vec<usize> {
        self.bi.iter().map(MonomialBasis::len).collect()
    }
}

fn enumerate(p: &Polytope, name: &str, budget: usize) -> Result<Vec<LatticePoint>, AssemblyError> {
    lattice_points_bounded(p, budget).ok_or_else(|| AssemblyError::BudgetExceeded { basis: name.to_string(), budget })
}

fn sum_all(ps: &[&Polytope], dim: usize) -> Result<Polytope, AssemblyError> {
    let mut acc = convex_hull(&[LatticePoint::origin(dim)])?;
    for p in ps {
        acc = minkowski_sum(&acc, p)?;
    }
    Ok(acc)
}

/// Enumerates the bases. Fails if any has more than `budget` points or if
/// `E` has no points beyond `B0`.
pub fn build_bases(spec: &SystemSpec, budget: usize) -> Result<BasisPair, AssemblyError> {
    let (b0_poly, bi_polys, e_poly) = match &spec.scheme {
        BasisScheme::Minkowski => {
            let a = &spec.polytopes;
            let k = a.len() - 1;
            // prefix[i] = A1+…+Ai, suffix[i] = Ai+…+Ak
            let mut prefix = vec![sum_all(&[], spec.dim)?];
            for i in 1..=k {
                prefix.push(minkowski_sum(&prefix[i - 1], &a[i])?);
            }
            let mut suffix = vec![sum_all(&[], spec.dim)?; k + 2];
            for i in (1..=k).rev() {
                suffix[i] = minkowski_sum(&suffix[i + 1], &a[i])?;
            }
            let b0 = prefix[k].clone();
            let bi = (1..=k)
                .map(|i| sum_all(&[&a[0], &prefix[i - 1], &suffix[i + 1]], spec.dim))
                .collect::<Result<Vec<_>, _>>()?;
            let e = minkowski_sum(&a[0], &b0)?;
            (b0, bi, e)
        }
        BasisScheme::Explicit { b0, bi, e } => (b0.clone(), bi.clone(), e.clone()),
    };
    let e_points = enumerate(&e_poly, "E", budget)?;
    let b0 = MonomialBasis::new(enumerate(&b0_poly, "B0", budget)?);
    let bi = bi_polys
        .iter()
        .enumerate()
        .map(|(i, p)| Ok(MonomialBasis::new(enumerate(p, &format!("B{}", i + 1), budget)?)))
        .collect::<Result<Vec<_>, AssemblyError>>()?;
    let mut ordered = b0.points().to_vec();
    ordered.extend(e_points.into_iter().filter(|p| b0.index_of(p).is_none()));
    let e = MonomialBasis::from_ordered(ordered);
    if e.len() == b0.len() {
        return Err(AssemblyError::EmptySecondBlock);
    }
    Ok(BasisPair { e, b0, bi })
}

/// Dense matrix of `Ψ` in the bases of a [`BasisPair`].
///
/// Rows follow `E`; the first `p` columns are `f0·B0`, then `f1·B1`, ….
#[derive(Clone, Debug)]
pub struct ResultantMatrix {
    data: Mat<Complex64>,
    p: usize,
    q: usize,
    block_sizes: Vec<usize>,
    provenance: Vec<(usize, LatticePoint)>,
    one_norm: f64,
}

/// The four blocks of a [`ResultantMatrix`].
pub struct Blocks<'a> {
    pub m11: MatRef<'a, Complex64>,
    pub m12: MatRef<'a, Complex64>,
    pub m21: MatRef<'a, Complex64>,
    pub m22: MatRef<'a, Complex64>,
}

impl ResultantMatrix {
    pub fn data(&self) -> MatRef<'_, Complex64> {
        self.data.as_ref()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `p1..pk`.
    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    /// `(i, m)` for each column: equation index (0 for `f0`) and multiplier.
    pub fn provenance(&self) -> &[(usize, LatticePoint)] {
        &self.provenance
    }

    /// Largest absolute column sum.
    pub fn one_norm(&self) -> f64 {
        self.one_norm
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    /// Matrix Market coordinate dump, complex general, 1-based.
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> io::Result<()> {
        let m = &self.data;
        let entries: Vec<(usize, usize, Complex64)> = (0..m.ncols())
            .flat_map(|j| (0..m.nrows()).map(move |i| (i, j)))
            .filter_map(|(i, j)| {
                let v = m[(i, j)];
                (v != Complex64::new(0.0, 0.0)).then_some((i, j, v))
            })
            .collect();
        writeln!(w, "%%MatrixMarket matrix coordinate complex general")?;
        writeln!(w, "% p = {}, q = {}", self.p, self.q)?;
        writeln!(w, "{} {} {}", m.nrows(), m.ncols(), entries.len())?;
        for (i, j, v) in entries {
            writeln!(w, "{} {} {:e} {:e}", i + 1, j + 1, v.re, v.im)?;
        }
        Ok(())
    }
}

fn thread_count(columns: usize) -> usize {
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    cap.min(columns / 256 + 1).max(1)
}

/// Builds `M`. Columns are computed in parallel over disjoint ranges, so the
/// result does not depend on the thread count.
pub fn assemble(spec: &SystemSpec, bases: &BasisPair) -> Result<ResultantMatrix, AssemblyError> {
    let mut provenance: Vec<(usize, LatticePoint)> = bases.b0.points().iter().map(|m| (0, m.clone())).collect();
    for (i, b) in bases.bi.iter().enumerate() {
        provenance.extend(b.points().iter().map(|m| (i + 1, m.clone())));
    }
    let polys: Vec<&LaurentPoly> = std::iter::once(spec.aux()).chain(spec.equations()).collect();
    let column = |(i, m): &(usize, LatticePoint)| -> Result<Vec<(usize, Complex64)>, AssemblyError> {
        polys[*i]
            .terms()
            .map(|(v, c)| {
                let w = v + m;
                match bases.e.index_of(&w) {
                    Some(r) => Ok((r, *c)),
                    None => Err(AssemblyError::OutsideE { equation: *i, monomial: w }),
                }
            })
            .collect()
    };
    let threads = thread_count(provenance.len());
    let chunk = provenance.len().div_ceil(threads);
    let columns: Vec<Vec<(usize, Complex64)>> = std::thread::scope(|s| {
        let handles: Vec<_> = provenance
            .chunks(chunk.max(1))
            .map(|part| s.spawn(move || part.iter().map(column).collect::<Result<Vec<_>, _>>()))
            .collect();
        let mut out = Vec::with_capacity(provenance.len());
        for h in handles {
            out.extend(h.join().expect("assembly worker panicked")?);
        }
        Ok::<_, AssemblyError>(out)
    })?;
    let mut data = Mat::<Complex64>::zeros(bases.e.len(), provenance.len());
    let mut one_norm = 0.0f64;
    for (j, col) in columns.iter().enumerate() {
        let mut s = 0.0;
        for &(r, c) in col {
            data[(r, j)] = c;
            s += c.norm();
        }
        one_norm = one_norm.max(s);
    }
    Ok(ResultantMatrix { data, p: bases.p(), q: bases.q(), block_sizes: bases.p_i(), provenance, one_norm })
}

/// Views of `M11 (p×p)`, `M12 (p×Σpi)`, `M21 (q×p)`, `M22 (q×Σpi)`.
pub fn block_split(m: &ResultantMatrix) -> Blocks<'_> {
    let (p, q) = (m.p, m.q);
    let rest = m.ncols() - p;
    let d = m.data.as_ref();
    Blocks {
        m11: d.submatrix(0, 0, p, p),
        m12: d.submatrix(0, p, p, rest),
        m21: d.submatrix(p, 0, q, p),
        m22: d.submatrix(p, p, q, rest),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::monomial_value;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pt(v: &[i64]) -> LatticePoint {
        LatticePoint::new(v.to_vec())
    }

    fn poly(dim: usize, t: &[(&[i64], f64)]) -> LaurentPoly {
        LaurentPoly::from_terms(dim, t.iter().map(|(v, k)| (pt(v), c(*k)))).unwrap()
    }

    fn intro_example() -> SystemSpec {
        let f1 = poly(2, &[(&[0, 0], 1.0), (&[1, 1], -1.0)]);
        let f2 = poly(2, &[(&[0, 0], 1.0), (&[0, 1], -1.0)]);
        let f0 = poly(2, &[(&[0, 0], 0.3), (&[1, 0], 1.7), (&[0, 1], -0.9)]);
        normalize_spec(f0, vec![f1, f2]).unwrap()
    }

    #[test]
    fn normalize_keeps_segments() {
        let spec = intro_example();
        for (a, f) in spec.polytopes()[1..].iter().zip(spec.equations()) {
            assert_eq!(*a, f.newton_polytope().unwrap());
        }
        assert_eq!(spec.scale_factors(), &[1, 1, 1]);
    }

    #[test]
    fn normalize_univariate_never_dilates() {
        let f1 = poly(1, &[(&[-2], 1.0), (&[3], 2.0)]);
        let f0 = poly(1, &[(&[0], 1.0), (&[1], 1.0)]);
        let spec = normalize_spec(f0, vec![f1]).unwrap();
        assert_eq!(spec.scale_factors(), &[1, 1]);
        assert_eq!(spec.polytopes()[1].vertices(), &[pt(&[0]), pt(&[5])]);
    }

    #[test]
    fn normalize_dilates_non_normal_simplex() {
        let f1 = poly(3, &[(&[0, 0, 0], 1.0), (&[1, 1, 0], 2.0), (&[1, 0, 1], 3.0), (&[0, 1, 1], 4.0)]);
        let f0 = poly(3, &[(&[0, 0, 0], 1.0), (&[1, 0, 0], 1.0), (&[0, 1, 0], 1.0), (&[0, 0, 1], 1.0)]);
        let spec = normalize_spec(f0, vec![f1.clone(), f1.clone(), f1]).unwrap();
        assert_eq!(spec.scale_factors(), &[1, 2, 2, 2]);
        assert!(spec.polytopes()[1].contains(&pt(&[1, 1, 1])));
    }

    #[test]
    fn normalize_rejects_bad_input() {
        let f1 = poly(2, &[(&[0, 0], 1.0), (&[1, 1], -1.0)]);
        let k = LaurentPoly::constant(2, c(2.0));
        assert_eq!(normalize_spec(k, vec![f1.clone()]).unwrap_err(), AssemblyError::ConstantAux);
        let f0 = poly(2, &[(&[1, 0], 1.0)]);
        assert_eq!(normalize_spec(f0.clone(), vec![]).unwrap_err(), AssemblyError::NoEquations);
        assert_eq!(normalize_spec(f0, vec![f1, LaurentPoly::zero(2)]).unwrap_err(), AssemblyError::ZeroEquation(2));
    }

    #[test]
    fn intro_example_bases() {
        let spec = intro_example();
        let b = build_bases(&spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(b.b0.points(), &[pt(&[0, 0]), pt(&[0, 1]), pt(&[1, 1]), pt(&[1, 2])]);
        assert_eq!((b.p(), b.q()), (4, 5));
        assert_eq!(b.p_i(), vec![5, 6]);
        assert_eq!(&b.e.points()[..4], b.b0.points());
        assert!(b.e.points()[0].is_origin());
        assert!(b.e.points()[4..].windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn budget_guard() {
        let spec = intro_example();
        assert!(matches!(build_bases(&spec, 6), Err(AssemblyError::BudgetExceeded { .. })));
    }

    #[test]
    fn single_equation_columns() {
        let f1 = poly(2, &[(&[0, 0], 1.0), (&[0, 1], -1.0)]);
        let f0 = poly(2, &[(&[0, 0], 1.0), (&[1, 0], 1.0)]);
        let spec = normalize_spec(f0, vec![f1]).unwrap();
        let b = build_bases(&spec, DEFAULT_BUDGET).unwrap();
        let m = assemble(&spec, &b).unwrap();
        for j in b.p()..m.ncols() {
            let mut nz: Vec<f64> = (0..m.nrows()).map(|i| m.data()[(i, j)].re).filter(|v| *v != 0.0).collect();
            nz.sort_by(f64::total_cmp);
            assert_eq!(nz, vec![-1.0, 1.0]);
        }
    }

    #[test]
    fn columns_are_shifted_coefficients() {
        let spec = intro_example();
        let b = build_bases(&spec, DEFAULT_BUDGET).unwrap();
        let m = assemble(&spec, &b).unwrap();
        assert_eq!(m.nrows(), b.p() + b.q());
        assert_eq!(m.ncols(), b.p() + 11);
        let polys: Vec<&LaurentPoly> = std::iter::once(spec.aux()).chain(spec.equations()).collect();
        for (j, (i, mono)) in m.provenance().iter().enumerate() {
            let nnz = (0..m.nrows()).filter(|&r| m.data()[(r, j)] != c(0.0)).count();
            assert_eq!(nnz, polys[*i].num_terms());
            for (v, k) in polys[*i].terms() {
                assert_eq!(m.data()[(b.e.index_of(&(v + mono)).unwrap(), j)], *k);
            }
        }
        assert_eq!(m.provenance()[..b.p()].iter().filter(|(i, _)| *i == 0).count(), b.p());
    }

    #[test]
    fn root_vector_annihilates_equation_columns() {
        // roots of {x1 x2 = 2, x2 = 4}: x = (1/2, 4)
        let f1 = poly(2, &[(&[0, 0], 2.0), (&[1, 1], -1.0)]);
        let f2 = poly(2, &[(&[0, 0], 4.0), (&[0, 1], -1.0)]);
        let f0 = poly(2, &[(&[0, 0], 0.3), (&[1, 0], 1.7), (&[0, 1], -0.9)]);
        let spec = normalize_spec(f0.clone(), vec![f1, f2]).unwrap();
        let b = build_bases(&spec, DEFAULT_BUDGET).unwrap();
        let m = assemble(&spec, &b).unwrap();
        let xi = [c(0.5), c(4.0)];
        let row: Vec<Complex64> = b.e.points().iter().map(|v| monomial_value(v, &xi)).collect();
        let lambda = f0.evaluate(&xi).unwrap();
        for j in 0..m.ncols() {
            let dot: Complex64 = (0..m.nrows()).map(|i| row[i] * m.data()[(i, j)]).sum();
            let expect = if j < b.p() { lambda * row[j] } else { c(0.0) };
            let scale: f64 = (0..m.nrows()).map(|i| (row[i] * m.data()[(i, j)]).norm()).sum();
            assert!((dot - expect).norm() <= 1e-12 * scale.max(1.0), "column {j}");
        }
    }

    #[test]
    fn split_round_trip() {
        let spec = intro_example();
        let b = build_bases(&spec, DEFAULT_BUDGET).unwrap();
        let m = assemble(&spec, &b).unwrap();
        let blocks = block_split(&m);
        let (p, q) = (m.p(), m.q());
        for i in 0..p + q {
            for j in 0..m.ncols() {
                let v = match (i < p, j < p) {
                    (true, true) => blocks.m11[(i, j)],
                    (true, false) => blocks.m12[(i, j - p)],
                    (false, true) => blocks.m21[(i - p, j)],
                    (false, false) => blocks.m22[(i - p, j - p)],
                };
                assert_eq!(v, m.data()[(i, j)]);
            }
        }
    }

    #[test]
    fn matrix_market_header() {
        let spec = intro_example();
        let b = build_bases(&spec, DEFAULT_BUDGET).unwrap();
        let m = assemble(&spec, &b).unwrap();
        let mut buf = Vec::new();
        m.write_matrix_market(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("%%MatrixMarket matrix coordinate complex general"));
        let nnz: usize = m.provenance().iter().map(|(i, _)| [3usize, 2, 2][*i]).sum();
        assert_eq!(lines.nth(1), Some(format!("9 15 {nnz}").as_str()));
    }

    #[test]
    fn explicit_bases_are_checked() {
        let spec = intro_example();
        let a = spec.polytopes().to_vec();
        let b0 = minkowski_sum(&a[1], &a[2]).unwrap();
        let e = minkowski_sum(&a[0], &b0).unwrap();
        let b1 = minkowski_sum(&a[0], &a[2]).unwrap();
        let b2 = minkowski_sum(&a[0], &a[1]).unwrap();
        let explicit = spec.clone().with_explicit_bases(b0.clone(), vec![b1.clone(), b2], e.clone()).unwrap();
        let (x, y) = (build_bases(&spec, 100).unwrap(), build_bases(&explicit, 100).unwrap());
        assert_eq!(x.e, y.e);
        assert!(spec.with_explicit_bases(b0.clone(), vec![b1.clone(), b1], b0).is_err());
    }
}
