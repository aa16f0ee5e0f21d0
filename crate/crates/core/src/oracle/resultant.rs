use std::f64::consts::PI;

use num_complex::Complex64;

use super::{OracleError, UnivariatePoly};
use crate::laurent::LaurentPoly;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Relative size under which interpolated resultant coefficients count as noise.
const COEFF_TRIM: f64 = 1e-10;
/// Relative size under which sampled determinants count as zero.
const ZERO_RESULTANT: f64 = 1e-10;
const NEWTON_ITERS: usize = 30;
const ROOT_MERGE: f64 = 1e-6;

/// Dense coefficients `c[a][b]` of `Σ c t^a y^b`, where `y` is the eliminated
/// variable and `t` the other one, after dividing out the largest monomial
/// factor.
struct Grid {
    c: Vec<Vec<Complex64>>,
}

impl Grid {
    fn new(f: &LaurentPoly, eliminate: usize) -> Result<Self, OracleError> {
        if f.dim() != 2 {
            return Err(OracleError::NotBivariate(f.dim()));
        }
        if eliminate > 1 {
            return Err(OracleError::DimensionMismatch { expected: 2, found: eliminate + 1 });
        }
        if f.is_zero() {
            return Err(OracleError::ZeroPolynomial);
        }
        let keep = 1 - eliminate;
        let (mut lo_t, mut lo_y, mut hi_t, mut hi_y) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
        for (v, _) in f.terms() {
            let (t, y) = (v.coords()[keep], v.coords()[eliminate]);
            lo_t = lo_t.min(t);
            lo_y = lo_y.min(y);
            hi_t = hi_t.max(t);
            hi_y = hi_y.max(y);
        }
        let mut c = vec![vec![ZERO; (hi_y - lo_y + 1) as usize]; (hi_t - lo_t + 1) as usize];
        for (v, &coef) in f.terms() {
            let (t, y) = (v.coords()[keep], v.coords()[eliminate]);
            c[(t - lo_t) as usize][(y - lo_y) as usize] += coef;
        }
        Ok(Grid { c })
    }

    fn deg_t(&self) -> usize {
        self.c.len() - 1
    }

    fn deg_y(&self) -> usize {
        self.c[0].len() - 1
    }

    fn norm1(&self) -> f64 {
        self.c.iter().flatten().map(|z| z.norm()).sum()
    }

    /// Coefficients in `y` at a fixed `t`.
    fn in_y(&self, t: Complex64) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.deg_y() + 1];
        let mut tp = Complex64::new(1.0, 0.0);
        for row in &self.c {
            for (o, &v) in out.iter_mut().zip(row) {
                *o += v * tp;
            }
            tp *= t;
        }
        out
    }

    /// Value and partials `(∂/∂t, ∂/∂y)`.
    fn eval(&self, t: Complex64, y: Complex64) -> (Complex64, Complex64, Complex64) {
        let (mut v, mut dt, mut dy) = (ZERO, ZERO, ZERO);
        for (a, row) in self.c.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if c == ZERO {
                    continue;
                }
                v += c * t.powu(a as u32) * y.powu(b as u32);
                if a > 0 {
                    dt += c * a as f64 * t.powu(a as u32 - 1) * y.powu(b as u32);
                }
                if b > 0 {
                    dy += c * b as f64 * t.powu(a as u32) * y.powu(b as u32 - 1);
                }
            }
        }
        (v, dt, dy)
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap();
        if a[piv][k] == ZERO {
            return ZERO;
        }
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let factor = a[i][k] / a[k][k];
            if factor == ZERO {
                continue;
            }
            for j in k..n {
                let sub = factor * a[k][j];
                a[i][j] -= sub;
            }
        }
    }
    det
}

/// Sylvester matrix of `f = Σ fa_b y^b` (degree `m`) and `g` (degree `n`).
fn sylvester(fa: &[Complex64], ga: &[Complex64]) -> Vec<Vec<Complex64>> {
    let (m, n) = (fa.len() - 1, ga.len() - 1);
    let size = m + n;
    let mut s = vec![vec![ZERO; size]; size];
    for i in 0..n {
        for (b, &c) in fa.iter().enumerate() {
            s[i][i + m - b] = c;
        }
    }
    for j in 0..m {
        for (b, &c) in ga.iter().enumerate() {
            s[n + j][j + n - b] = c;
        }
    }
    s
}

fn resultant_of_grids(f: &Grid, g: &Grid) -> Result<UnivariatePoly, OracleError> {
    let (m, n) = (f.deg_y(), g.deg_y());
    if m + n == 0 {
        return Err(OracleError::NoEliminatedVariable);
    }
    let bound = n * f.deg_t() + m * g.deg_t();
    let samples = bound + 1;
    let omega = |k: usize| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / samples as f64);
    let values: Vec<Complex64> = (0..samples)
        .map(|k| {
            let t = omega(k);
            determinant(sylvester(&f.in_y(t), &g.in_y(t)))
        })
        .collect();
    let scale = f.norm1().powi(n as i32) * g.norm1().powi(m as i32);
    if values.iter().all(|v| v.norm() <= ZERO_RESULTANT * scale) {
        return Err(OracleError::ZeroResultant);
    }
    let coeffs = (0..samples)
        .map(|j| {
            let s: Complex64 = values.iter().enumerate().map(|(k, &v)| v * omega(k * j % samples).conj()).sum();
            s / samples as f64
        })
        .collect();
    Ok(UnivariatePoly::new(coeffs).trimmed(COEFF_TRIM))
}

/// Resultant of `f` and `g` with respect to variable `eliminate`, as a
/// polynomial in the other variable.
///
/// Each input is first divided by its largest monomial factor. The result is
/// interpolated from Sylvester determinants at roots of unity and is defined
/// up to sign.
pub fn sylvester_resultant(f: &LaurentPoly, g: &LaurentPoly, eliminate: usize) -> Result<UnivariatePoly, OracleError> {
    resultant_of_grids(&Grid::new(f, eliminate)?, &Grid::new(g, eliminate)?)
}

/// Common roots of two bivariate polynomials.
///
/// `x1` ranges over the roots of the resultant eliminating `x2`; `x2` is
/// recovered from the roots of each specialization, and every pair is refined
/// by Newton's method. Pairs satisfying `|f|, |g| < 1e-8 · (1 + ‖·‖₁)` are
/// returned without repetition. Roots refer to the inputs divided by their
/// largest monomial factors, which is the same zero set on the torus.
pub fn bivariate_solve(f: &LaurentPoly, g: &LaurentPoly) -> Result<Vec<[Complex64; 2]>, OracleError> {
    let (gf, gg) = (Grid::new(f, 1)?, Grid::new(g, 1)?);
    let res = resultant_of_grids(&gf, &gg)?;
    let (tol_f, tol_g) = (1e-8 * (1.0 + gf.norm1()), 1e-8 * (1.0 + gg.norm1()));
    let mut out: Vec<[Complex64; 2]> = Vec::new();
    for x1 in res.roots()? {
        let mut cands = UnivariatePoly::new(gf.in_y(x1)).trimmed(1e-12).roots()?;
        cands.extend(UnivariatePoly::new(gg.in_y(x1)).trimmed(1e-12).roots()?);
        for x2 in cands {
            let p = newton(&gf, &gg, [x1, x2]);
            let (vf, vg) = (gf.eval(p[0], p[1]).0, gg.eval(p[0], p[1]).0);
            if !(vf.norm() < tol_f && vg.norm() < tol_g) {
                continue;
            }
            let close = |q: &[Complex64; 2]| (0..2).all(|i| (p[i] - q[i]).norm() <= ROOT_MERGE * (1.0 + q[i].norm()));
            if !out.iter().any(close) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Newton's method on `(f, g)`, keeping the iterate with the smallest residual.
fn newton(f: &Grid, g: &Grid, start: [Complex64; 2]) -> [Complex64; 2] {
    let residual = |p: [Complex64; 2]| f.eval(p[0], p[1]).0.norm() + g.eval(p[0], p[1]).0.norm();
    let mut best = (residual(start), start);
    let mut p = start;
    for _ in 0..NEWTON_ITERS {
        let (fv, ft, fy) = f.eval(p[0], p[1]);
        let (gv, gt, gy) = g.eval(p[0], p[1]);
        let det = ft * gy - fy * gt;
        if det.norm() == 0.0 {
            break;
        }
        let dt = (fv * gy - fy * gv) / det;
        let dy = (ft * gv - fv * gt) / det;
        p = [p[0] - dt, p[1] - dy];
        if !(p[0].is_finite() && p[1].is_finite()) {
            break;
        }
        let r = residual(p);
        if r < best.0 {
            best = (r, p);
        }
        if dt.norm() + dy.norm() <= 1e-15 * (1.0 + p[0].norm() + p[1].norm()) {
            break;
        }
    }
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePoint;

    fn poly(terms: &[([i64; 2], f64)]) -> LaurentPoly {
        LaurentPoly::from_terms(2, terms.iter().map(|(v, c)| (LatticePoint::new(v.to_vec()), Complex64::new(*c, 0.0))))
            .unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn hand_computed_resultant() {
        let f = poly(&[([0, 0], 1.0), ([1, 1], -1.0)]);
        let g = poly(&[([0, 0], 1.0), ([0, 1], -1.0)]);
        let r = sylvester_resultant(&f, &g, 1).unwrap();
        assert_eq!(r.degree(), Some(1));
        let k = r.coeffs()[0];
        assert!((r.coeffs()[1] + k).norm() < 1e-12 && k.norm() > 0.5);
    }

    #[test]
    fn identical_inputs_have_zero_resultant() {
        let f = poly(&[([0, 0], 1.0), ([1, 1], -1.0), ([0, 2], 3.0)]);
        assert_eq!(sylvester_resultant(&f, &f, 1), Err(OracleError::ZeroResultant));
        assert_eq!(bivariate_solve(&f, &f), Err(OracleError::ZeroResultant));
    }

    #[test]
    fn generic_quadratics_have_degree_four_resultant() {
        let f = poly(&[([0, 0], 3.0), ([1, 0], -2.0), ([0, 1], 1.0), ([2, 0], 5.0), ([1, 1], -7.0), ([0, 2], 2.0)]);
        let g = poly(&[([0, 0], -4.0), ([1, 0], 1.0), ([0, 1], 6.0), ([2, 0], 1.0), ([1, 1], 3.0), ([0, 2], -9.0)]);
        assert_eq!(sylvester_resultant(&f, &g, 1).unwrap().degree(), Some(4));
        assert_eq!(sylvester_resultant(&f, &g, 0).unwrap().degree(), Some(4));
        assert_eq!(bivariate_solve(&f, &g).unwrap().len(), 4);
    }

    #[test]
    fn introductory_example() {
        let f = poly(&[([0, 0], 1.0), ([1, 1], -1.0)]);
        let g = poly(&[([0, 0], 1.0), ([0, 1], -1.0)]);
        let roots = bivariate_solve(&f, &g).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0][0] - c(1.0)).norm() < 1e-12 && (roots[0][1] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn eliminated_variable_absent_from_one_equation() {
        let f = poly(&[([2, 0], 1.0), ([0, 0], -1.0)]);
        let g = poly(&[([0, 1], 1.0), ([0, 0], -1.0)]);
        let mut roots = bivariate_solve(&f, &g).unwrap();
        roots.sort_by(|a, b| a[0].re.total_cmp(&b[0].re));
        assert_eq!(roots.len(), 2);
        assert!((roots[0][0] - c(-1.0)).norm() < 1e-12 && (roots[0][1] - c(1.0)).norm() < 1e-12);
        assert!((roots[1][0] - c(1.0)).norm() < 1e-12 && (roots[1][1] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn negative_exponents_are_cleared() {
        // x1 x2⁻¹ − 1 and x2 − 2 share the root (2, 2).
        let f = poly(&[([1, -1], 1.0), ([0, 0], -1.0)]);
        let g = poly(&[([0, 1], 1.0), ([0, 0], -2.0)]);
        let roots = bivariate_solve(&f, &g).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0][0] - c(2.0)).norm() < 1e-12 && (roots[0][1] - c(2.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let f = LaurentPoly::constant(3, c(1.0));
        assert_eq!(sylvester_resultant(&f, &f, 0), Err(OracleError::NotBivariate(3)));
        let u = poly(&[([0, 0], 1.0), ([1, 0], 1.0)]);
        assert_eq!(sylvester_resultant(&u, &u, 1), Err(OracleError::NoEliminatedVariable));
    }

    #[test]
    fn determinant_matches_hand_value() {
        let a = vec![vec![c(2.0), c(1.0), c(0.0)], vec![c(1.0), c(3.0), c(1.0)], vec![c(0.0), c(1.0), c(4.0)]];
        assert!((determinant(a) - c(18.0)).norm() < 1e-12);
    }
}
