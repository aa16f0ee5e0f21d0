use faer::Mat;
use num_complex::Complex64;

use super::OracleError;

/// Complex polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariatePoly {
    coeffs: Vec<Complex64>,
}

impl UnivariatePoly {
    /// Drops exact trailing zeros.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Drops trailing coefficients with modulus at most `rel · max |c|`.
    pub fn trimmed(&self, rel: f64) -> Self {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= rel * max) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    /// Companion-matrix eigenvalues, each refined by a few Newton steps.
    pub fn roots(&self) -> Result<Vec<Complex64>, OracleError> {
        let d = match self.degree() {
            None | Some(0) => return Ok(Vec::new()),
            Some(d) => d,
        };
        let lead = self.coeffs[d];
        let companion = Mat::<Complex64>::from_fn(d, d, |i, j| {
            if j == d - 1 {
                -self.coeffs[i] / lead
            } else if i == j + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let mut roots = companion.eigenvalues().map_err(|_| OracleError::Eigen)?;
        let dp = self.derivative();
        for z in roots.iter_mut() {
            for _ in 0..3 {
                let (v, dv) = (self.eval(*z), dp.eval(*z));
                if dv.norm() == 0.0 {
                    break;
                }
                let next = *z - v / dv;
                if !next.is_finite() || self.eval(next).norm() >= v.norm() {
                    break;
                }
                *z = next;
            }
        }
        Ok(roots)
    }
}
