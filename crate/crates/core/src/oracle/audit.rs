use faer::MatRef;
use num_complex::Complex64;

use super::OracleError;
use crate::laurent::LaurentPoly;

/// Maximum absolute row sum.
pub fn inf_norm(r: MatRef<'_, Complex64>) -> f64 {
    (0..r.nrows()).map(|i| (0..r.ncols()).map(|j| r[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `‖wR − λw‖_∞` computed entrywise.
pub fn left_eigen_residual(r: MatRef<'_, Complex64>, value: Complex64, w: &[Complex64]) -> Result<f64, OracleError> {
    if r.nrows() != r.ncols() || w.len() != r.nrows() {
        return Err(OracleError::DimensionMismatch { expected: r.nrows(), found: w.len() });
    }
    let mut worst = 0.0f64;
    for j in 0..r.ncols() {
        let mut s = -value * w[j];
        for (i, wi) in w.iter().enumerate() {
            s += wi * r[(i, j)];
        }
        worst = worst.max(s.norm());
    }
    Ok(worst)
}

/// `|f_i(x)|` for each equation, summing monomials with integer powers.
pub fn equation_residuals(eqs: &[LaurentPoly], x: &[Complex64]) -> Result<Vec<f64>, OracleError> {
    eqs.iter()
        .map(|f| {
            if f.dim() != x.len() {
                return Err(OracleError::DimensionMismatch { expected: f.dim(), found: x.len() });
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (v, c) in f.terms() {
                let mut term = *c;
                for (xi, &e) in x.iter().zip(v.coords()) {
                    term *= xi.powi(e as i32);
                }
                s += term;
            }
            Ok(s.norm())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePoint;
    use faer::Mat;

    #[test]
    fn residual_of_exact_pair() {
        let r = Mat::<Complex64>::from_fn(2, 2, |i, j| Complex64::new([[2.0, 1.0], [0.0, 3.0]][i][j], 0.0));
        let w = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert_eq!(left_eigen_residual(r.as_ref(), Complex64::new(2.0, 0.0), &w).unwrap(), 1.0);
        let w = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(left_eigen_residual(r.as_ref(), Complex64::new(3.0, 0.0), &w).unwrap(), 0.0);
        assert_eq!(inf_norm(r.as_ref()), 3.0);
    }

    #[test]
    fn residuals_with_negative_exponents() {
        let f = LaurentPoly::from_terms(
            2,
            [
                (LatticePoint::new(vec![1, -1]), Complex64::new(1.0, 0.0)),
                (LatticePoint::new(vec![0, 0]), Complex64::new(-1.0, 0.0)),
            ],
        )
        .unwrap();
        let x = [Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0)];
        assert_eq!(equation_residuals(&[f], &x).unwrap(), vec![0.0]);
    }
}
