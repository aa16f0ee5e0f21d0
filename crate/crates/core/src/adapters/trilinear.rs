use num_complex::Complex64;

use super::AdapterError;
use crate::assembly::SystemSpec;
use crate::lattice::{LatticePoint, Polytope};
use crate::laurent::LaurentPoly;
use crate::solver::default_aux;

/// Equations of multidegree at most `(1, 1, 1)` in variable blocks of sizes
/// `(n, m, s)`, laid out as `x1..xn, y1..ym, z1..zs`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrilinearSpec {
    blocks: [usize; 3],
    equations: Vec<LaurentPoly>,
}

impl TrilinearSpec {
    pub fn new(blocks: [usize; 3], equations: Vec<LaurentPoly>) -> Result<Self, AdapterError> {
        if equations.is_empty() {
            return Err(AdapterError::NoEquations);
        }
        for (i, f) in equations.iter().enumerate() {
            check_multidegree(blocks, f).map_err(|_| AdapterError::MultidegreeExceeded(i + 1))?;
        }
        Ok(TrilinearSpec { blocks, equations })
    }

    pub fn blocks(&self) -> [usize; 3] {
        self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn equations(&self) -> &[LaurentPoly] {
        &self.equations
    }
}

/// Ok iff every exponent is nonnegative and each block degree is at most 1.
pub(crate) fn check_multidegree(blocks: [usize; 3], f: &LaurentPoly) -> Result<(), ()> {
    if f.dim() != blocks.iter().sum::<usize>() {
        return Err(());
    }
    for (v, _) in f.terms() {
        let c = v.coords();
        if c.iter().any(|&e| e < 0) {
            return Err(());
        }
        let mut start = 0;
        for &b in &blocks {
            if c[start..start + b].iter().sum::<i64>() > 1 {
                return Err(());
            }
            start += b;
        }
    }
    Ok(())
}

/// `(a Δn) × (b Δm) × (c Δs)`.
pub fn block_polytope(blocks: [usize; 3], degrees: [i64; 3]) -> Result<Polytope, AdapterError> {
    Ok(Polytope::simplex_product(&blocks, &degrees)?)
}

/// Prepares a trilinear system for solving.
///
/// Every declared polytope is `Δn × Δm × Δs`. The row basis is the product
/// polytope of multidegree `degree` and all multiplier bases have multidegree
/// `degree − (1,1,1)`. Without an override, `degree = (k+1, k+1, k+1)` for
/// `k` equations. `f0` defaults to a seeded generic linear form.
pub fn trilinear_system(
    spec: &TrilinearSpec,
    aux: Option<LaurentPoly>,
    seed: u64,
    degree: Option<[i64; 3]>,
) -> Result<SystemSpec, AdapterError> {
    let blocks = spec.blocks;
    let dim = spec.dim();
    let aux = aux.unwrap_or_else(|| default_aux(dim, seed));
    check_multidegree(blocks, &aux).map_err(|_| AdapterError::MultidegreeExceeded(0))?;
    let k = spec.equations.len() as i64;
    let degree = degree.unwrap_or([k + 1; 3]);
    if degree.iter().any(|&d| d < 1) {
        return Err(AdapterError::BadDegrees("row multidegree entries must be at least 1".into()));
    }
    let a = block_polytope(blocks, [1, 1, 1])?;
    let e = block_polytope(blocks, degree)?;
    let b = block_polytope(blocks, degree.map(|d| d - 1))?;
    let sys = SystemSpec::new(aux, spec.equations.clone(), vec![a; spec.equations.len() + 1])?;
    Ok(sys.with_explicit_bases(b.clone(), vec![b; spec.equations.len()], e)?)
}

/// Exponent vector of `x_a y_b z_c` with index 0 of each block meaning the
/// constant coordinate.
pub(crate) fn chart_monomial(blocks: [usize; 3], idx: [usize; 3]) -> LatticePoint {
    let mut v = vec![0i64; blocks.iter().sum()];
    let mut start = 0;
    for (t, &b) in blocks.iter().enumerate() {
        if idx[t] > 0 {
            v[start + idx[t] - 1] = 1;
        }
        start += b;
    }
    LatticePoint::new(v)
}

/// `Σ c_{abc} x_a y_b z_c` with `x_0 = y_0 = z_0 = 1`.
pub(crate) fn chart_form(t: &super::Tensor3) -> LaurentPoly {
    let [n1, n2, n3] = t.dims();
    let blocks = [n1 - 1, n2 - 1, n3 - 1];
    let mut terms = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            for k in 0..n3 {
                let v = t.get(i, j, k);
                if v != 0.0 {
                    terms.push((chart_monomial(blocks, [i, j, k]), Complex64::new(v, 0.0)));
                }
            }
        }
    }
    LaurentPoly::from_terms(blocks.iter().sum(), terms).expect("finite entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{build_bases, DEFAULT_BUDGET};
    use crate::laurent::CoeffStyle;
    use crate::solver::{solve_spec, SolveOptions};

    fn generic(blocks: [usize; 3], seed: u64) -> LaurentPoly {
        let support = crate::lattice::lattice_points(&block_polytope(blocks, [1, 1, 1]).unwrap());
        LaurentPoly::random_generic(&support, seed, CoeffStyle::UnitComplex).unwrap()
    }

    #[test]
    fn bases_are_products() {
        let spec = TrilinearSpec::new([1, 1, 1], vec![generic([1, 1, 1], 1)]).unwrap();
        let sys = trilinear_system(&spec, None, 0, None).unwrap();
        let b = build_bases(&sys, DEFAULT_BUDGET).unwrap();
        assert_eq!(b.e.len(), 27);
        assert_eq!(b.p(), 8);
        assert_eq!(b.p_i(), vec![8]);
    }

    #[test]
    fn multiplier_basis_contains_variables() {
        let blocks = [2, 1, 2];
        let eqs = (0..5).map(|s| generic(blocks, s)).collect();
        let spec = TrilinearSpec::new(blocks, eqs).unwrap();
        let sys = trilinear_system(&spec, None, 0, Some([2, 2, 2])).unwrap();
        let b = build_bases(&sys, DEFAULT_BUDGET).unwrap();
        assert!(b.b0.points()[0].is_origin());
        for j in 0..5 {
            assert!(b.b0.index_of(&LatticePoint::unit(5, j)).is_some());
        }
    }

    #[test]
    fn rejects_high_multidegree() {
        let f = LaurentPoly::from_terms(3, [(LatticePoint::new(vec![2, 0, 0]), Complex64::new(1.0, 0.0))]).unwrap();
        assert_eq!(TrilinearSpec::new([1, 1, 1], vec![f]).unwrap_err(), AdapterError::MultidegreeExceeded(1));
    }

    #[test]
    fn generic_cube_system_has_six_roots() {
        let eqs = (0..3).map(|s| generic([1, 1, 1], 100 + s)).collect();
        let spec = TrilinearSpec::new([1, 1, 1], eqs).unwrap();
        let sys = trilinear_system(&spec, None, 7, None).unwrap();
        let sol = solve_spec(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(sol.rank22, sol.q);
        assert_eq!(sol.accepted.len(), 6);
    }
}
