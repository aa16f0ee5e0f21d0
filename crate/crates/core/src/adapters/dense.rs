use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::AdapterError;
use crate::assembly::SystemSpec;
use crate::lattice::{lattice_points, Polytope};
use crate::laurent::{CoeffStyle, LaurentPoly};

/// Random dense system: `f0` of degree `d`, `fi` of degree `degrees[i]`, all
/// supported on full dilated simplices in `n` variables.
///
/// Coefficients are integers in `[-10, 10] \ {0}` drawn from one seeded
/// generator, `f0` first, each polynomial's monomials in lexicographic order.
/// Declared polytopes are the simplices themselves, so the bases are
/// `S_{e−d}`, `S_{e−di}` and `S_e` with `e = d + Σ di`.
pub fn dense_system(d: i64, degrees: &[i64], n: usize, seed: u64) -> Result<SystemSpec, AdapterError> {
    if n == 0 {
        return Err(AdapterError::BadDegrees("need at least one variable".into()));
    }
    if d < 1 || degrees.is_empty() || degrees.iter().any(|&di| di < 1) {
        return Err(AdapterError::BadDegrees("all degrees must be at least 1 and k ≥ 1".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut polys = Vec::with_capacity(degrees.len() + 1);
    let mut polytopes = Vec::with_capacity(degrees.len() + 1);
    for &deg in std::iter::once(&d).chain(degrees) {
        let simplex = Polytope::simplex(n, deg)?;
        let support = lattice_points(&simplex);
        polys.push(LaurentPoly::random_generic_with(&support, &mut rng, CoeffStyle::IntegerBox)?);
        polytopes.push(simplex);
    }
    let aux = polys.remove(0);
    Ok(SystemSpec::new(aux, polys, polytopes)?)
}
