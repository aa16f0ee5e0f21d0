//! Sparse Laurent polynomials over `C`, with an exact coefficient mode for
//! geometry tests.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::lattice::{convex_hull, LatticeError, LatticePoint, Polytope};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaurentError {
    #[error("operation on the zero polynomial")]
    ZeroPolynomial,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {index} is zero but carries a negative exponent")]
    ZeroCoordinate { index: usize },
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("empty support")]
    EmptySupport,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Coefficient ring. Complex doubles in the solver, exact rationals in tests.
pub trait Coefficient: Clone + PartialEq + Zero + Add<Output = Self> + Mul<Output = Self> {
    fn is_valid(&self) -> bool {
        true
    }
}

impl Coefficient for Complex64 {
    fn is_valid(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl<T: Clone + num_integer::Integer> Coefficient for num_rational::Ratio<T> {}

impl Coefficient for f64 {
    fn is_valid(&self) -> bool {
        self.is_finite()
    }
}

/// `Σ c_v x^v` with `v ∈ Z^n`. Terms iterate in lexicographic exponent order.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<C = Complex64> {
    dim: usize,
    terms: BTreeMap<LatticePoint, C>,
}

/// Coefficient distribution for [`LaurentPoly::random_generic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffStyle {
    /// Integers in `[-10, 10] \ {0}`.
    IntegerBox,
    /// Unit modulus, uniform phase.
    UnitComplex,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly { dim, terms: BTreeMap::new() }
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (LatticePoint, C)>,
    {
        let mut map: BTreeMap<LatticePoint, C> = BTreeMap::new();
        for (v, c) in terms {
            if v.dim() != dim {
                return Err(LaurentError::DimensionMismatch { expected: dim, found: v.dim() });
            }
            if !c.is_valid() {
                return Err(LaurentError::NonFinite);
            }
            let slot = map.entry(v).or_insert_with(C::zero);
            *slot = slot.clone() + c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(LaurentPoly { dim, terms: map })
    }

    pub fn constant(dim: usize, c: C) -> Self {
        Self::monomial(LatticePoint::origin(dim), c)
    }

    pub fn monomial(v: LatticePoint, c: C) -> Self {
        let dim = v.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(v, c);
        }
        LaurentPoly { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the only possible term is the constant one.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|v| v.is_origin())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, v: &LatticePoint) -> Option<&C> {
        self.terms.get(v)
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().cloned().collect()
    }

    pub fn newton_polytope(&self) -> Result<Polytope, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        Ok(convex_hull(&self.support())?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LaurentError> {
        if self.dim != other.dim {
            return Err(LaurentError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let products = self
            .terms
            .iter()
            .flat_map(|(a, ca)| other.terms.iter().map(move |(b, cb)| (a + b, ca.clone() * cb.clone())));
        Self::from_terms(self.dim, products)
    }

    /// `x^m · f`.
    pub fn shift(&self, m: &LatticePoint) -> Self {
        LaurentPoly { dim: self.dim, terms: self.terms.iter().map(|(v, c)| (v + m, c.clone())).collect() }
    }

    /// Divides by the lexicographically smallest monomial, putting the origin
    /// in the support. Zeros in the torus are unchanged.
    pub fn shift_to_origin(&self) -> Result<Self, LaurentError> {
        let (first, _) = self.terms.iter().next().ok_or(LaurentError::ZeroPolynomial)?;
        Ok(self.shift(&(&LatticePoint::origin(self.dim) - first)))
    }

    /// The lexicographically smallest exponent.
    pub fn leading_exponent(&self) -> Option<&LatticePoint> {
        self.terms.keys().next()
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Result<LaurentPoly<D>, LaurentError> {
        LaurentPoly::from_terms(self.dim, self.terms.iter().map(|(v, c)| (v.clone(), f(c))))
    }
}

impl LaurentPoly<Complex64> {
    fn check_point(&self, x: &[Complex64]) -> Result<(), LaurentError> {
        if x.len() != self.dim {
            return Err(LaurentError::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        for v in self.terms.keys() {
            for (j, &e) in v.coords().iter().enumerate() {
                if e < 0 && x[j].is_zero() {
                    return Err(LaurentError::ZeroCoordinate { index: j });
                }
            }
        }
        Ok(())
    }

    /// `Σ c_v Π x_j^{v_j}`, term by term.
    pub fn evaluate(&self, x: &[Complex64]) -> Result<Complex64, LaurentError> {
        self.check_point(x)?;
        Ok(self.terms.iter().map(|(v, c)| c * monomial_value(v, x)).sum())
    }

    /// Partial derivatives at `x`. Requires every coordinate nonzero.
    pub fn gradient(&self, x: &[Complex64]) -> Result<Vec<Complex64>, LaurentError> {
        self.check_point(x)?;
        let mut g = vec![Complex64::zero(); self.dim];
        for (v, c) in &self.terms {
            for (j, &e) in v.coords().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut w = v.coords().to_vec();
                w[j] -= 1;
                let w = LatticePoint::new(w);
                if w.coords().iter().zip(x).any(|(&k, xi)| k < 0 && xi.is_zero()) {
                    return Err(LaurentError::ZeroCoordinate { index: j });
                }
                g[j] += c * e as f64 * monomial_value(&w, x);
            }
        }
        Ok(g)
    }

    /// Sum of coefficient moduli.
    pub fn coeff_norm1(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        LaurentPoly::from_terms(self.dim, self.terms.iter().map(|(v, c)| (v.clone(), c * s)))
            .expect("scaling preserves validity")
    }

    /// Seeded coefficients on a fixed support; one term per support point.
    pub fn random_generic(support: &[LatticePoint], seed: u64, style: CoeffStyle) -> Result<Self, LaurentError> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        Self::random_generic_with(support, &mut rng, style)
    }

    /// As [`random_generic`](Self::random_generic), drawing from a caller-owned generator.
    pub fn random_generic_with<R: Rng>(
        support: &[LatticePoint],
        rng: &mut R,
        style: CoeffStyle,
    ) -> Result<Self, LaurentError> {
        let dim = support.first().ok_or(LaurentError::EmptySupport)?.dim();
        let mut terms = BTreeMap::new();
        for v in support {
            if v.dim() != dim {
                return Err(LaurentError::DimensionMismatch { expected: dim, found: v.dim() });
            }
            let c = match style {
                CoeffStyle::IntegerBox => loop {
                    let k: i32 = rng.random_range(-10..=10);
                    if k != 0 {
                        break Complex64::new(k as f64, 0.0);
                    }
                },
                CoeffStyle::UnitComplex => Complex64::from_polar(1.0, rng.random_range(0.0..TAU)),
            };
            terms.insert(v.clone(), c);
        }
        Ok(LaurentPoly { dim, terms })
    }
}

pub(crate) fn monomial_value(v: &LatticePoint, x: &[Complex64]) -> Complex64 {
    v.coords().iter().zip(x).fold(Complex64::new(1.0, 0.0), |acc, (&e, xi)| acc * xi.powi(e as i32))
}

impl<C: Coefficient + fmt::Debug> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (v, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            for (j, &e) in v.coords().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", j + 1)?,
                    _ => write!(f, "*x{}^{}", j + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::minkowski_sum;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn poly(dim: usize, t: &[(&[i64], f64)]) -> LaurentPoly {
        LaurentPoly::from_terms(dim, t.iter().map(|(v, k)| (LatticePoint::new(v.to_vec()), c(*k)))).unwrap()
    }

    fn pt(v: &[i64]) -> LatticePoint {
        LatticePoint::new(v.to_vec())
    }

    #[test]
    fn newton_polytope_examples() {
        let f = poly(2, &[(&[0, 0], 1.0), (&[1, 1], -1.0)]);
        assert_eq!(f.newton_polytope().unwrap().vertices(), &[pt(&[0, 0]), pt(&[1, 1])]);
        let g = poly(2, &[(&[0, 0], 5.0)]);
        assert_eq!(g.newton_polytope().unwrap().vertices(), &[pt(&[0, 0])]);
        let h = poly(2, &[(&[-1, 0], 1.0), (&[0, 1], 1.0)]);
        assert_eq!(h.newton_polytope().unwrap().vertices(), &[pt(&[-1, 0]), pt(&[0, 1])]);
        assert_eq!(LaurentPoly::<Complex64>::zero(2).newton_polytope().unwrap_err(), LaurentError::ZeroPolynomial);
    }

    #[test]
    fn evaluate_examples() {
        let one = [c(1.0), c(1.0)];
        assert_eq!(poly(2, &[(&[0, 0], 1.0), (&[1, 1], -1.0)]).evaluate(&one).unwrap(), c(0.0));
        assert_eq!(poly(2, &[(&[0, 0], 1.0), (&[0, 1], -1.0)]).evaluate(&one).unwrap(), c(0.0));
        let k = Complex64::new(2.5, -1.0);
        assert_eq!(LaurentPoly::constant(2, k).evaluate(&[c(3.0), c(-7.0)]).unwrap(), k);
        let inv = poly(1, &[(&[-2], 1.0)]);
        assert_eq!(inv.evaluate(&[c(2.0)]).unwrap(), c(0.25));
        assert_eq!(inv.evaluate(&[c(0.0)]).unwrap_err(), LaurentError::ZeroCoordinate { index: 0 });
    }

    #[test]
    fn mul_examples() {
        let f = poly(2, &[(&[0, 0], 1.0), (&[1, 1], -1.0)]);
        assert_eq!(f.mul(&LaurentPoly::constant(2, c(1.0))).unwrap(), f);
        let a = poly(2, &[(&[0, 0], 1.0), (&[0, 1], -1.0)]);
        let b = poly(2, &[(&[0, 0], 1.0), (&[0, 1], 1.0)]);
        assert_eq!(a.mul(&b).unwrap(), poly(2, &[(&[0, 0], 1.0), (&[0, 2], -1.0)]));
    }

    #[test]
    fn shift_examples() {
        let f = poly(2, &[(&[1, 1], 1.0), (&[1, 0], -1.0)]);
        assert_eq!(f.shift_to_origin().unwrap(), poly(2, &[(&[0, 1], 1.0), (&[0, 0], -1.0)]));
        let g = poly(2, &[(&[0, 0], 1.0), (&[1, 2], 3.0)]);
        assert_eq!(g.shift_to_origin().unwrap(), g);
        let h = poly(2, &[(&[-1, 0], 1.0), (&[0, 1], 1.0)]);
        assert_eq!(h.shift_to_origin().unwrap(), poly(2, &[(&[0, 0], 1.0), (&[1, 1], 1.0)]));
    }

    #[test]
    fn random_generic_examples() {
        let support: Vec<_> = (0..6).map(|i| pt(&[i, 6 - i])).collect();
        let a = LaurentPoly::random_generic(&support, 42, CoeffStyle::IntegerBox).unwrap();
        let b = LaurentPoly::random_generic(&support, 42, CoeffStyle::IntegerBox).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num_terms(), 6);
        for (_, k) in a.terms() {
            assert!(k.im == 0.0 && k.re.fract() == 0.0 && k.re.abs() <= 10.0 && k.re != 0.0);
        }
        let u = LaurentPoly::random_generic(&support, 7, CoeffStyle::UnitComplex).unwrap();
        assert!(u.terms().all(|(_, k)| (k.norm() - 1.0).abs() < 1e-15));
        assert_eq!(
            LaurentPoly::random_generic(&[], 1, CoeffStyle::UnitComplex).unwrap_err(),
            LaurentError::EmptySupport
        );
    }

    #[test]
    fn integer_box_covers_range() {
        let support: Vec<_> = (0..400).map(|i| pt(&[i])).collect();
        let f = LaurentPoly::random_generic(&support, 3, CoeffStyle::IntegerBox).unwrap();
        let seen: std::collections::BTreeSet<i64> = f.terms().map(|(_, k)| k.re as i64).collect();
        assert_eq!(seen.len(), 20);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let f = poly(2, &[(&[2, -1], 3.0), (&[0, 1], -2.0), (&[1, 1], 0.5)]);
        let x = [Complex64::new(0.7, 0.2), Complex64::new(-1.1, 0.4)];
        let g = f.gradient(&x).unwrap();
        let h = 1e-6;
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let fd = (f.evaluate(&xp).unwrap() - f.evaluate(&xm).unwrap()) / (2.0 * h);
            assert!((fd - g[j]).norm() < 1e-7);
        }
    }

    fn exps(dim: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-3i64..=3, dim)
    }

    fn rational_poly(dim: usize) -> impl Strategy<Value = LaurentPoly<Ratio<i64>>> {
        proptest::collection::vec((exps(dim), -50i64..=50, 1i64..=7), 1..6).prop_filter_map("nonzero", move |t| {
            let p =
                LaurentPoly::from_terms(dim, t.into_iter().map(|(v, a, b)| (LatticePoint::new(v), Ratio::new(a, b))))
                    .ok()?;
            (!p.is_zero()).then_some(p)
        })
    }

    fn complex_poly(dim: usize) -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((exps(dim), -5.0f64..5.0, -5.0f64..5.0), 1..6).prop_filter_map("nonzero", move |t| {
            let p = LaurentPoly::from_terms(
                dim,
                t.into_iter().map(|(v, a, b)| (LatticePoint::new(v), Complex64::new(a, b))),
            )
            .ok()?;
            (!p.is_zero()).then_some(p)
        })
    }

    fn torus_point(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
        proptest::collection::vec((0.5f64..2.0, 0.0f64..TAU), dim)
            .prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn evaluate_is_multiplicative((f, g, x) in (1usize..=3).prop_flat_map(|d| (complex_poly(d), complex_poly(d), torus_point(d)))) {
            let fg = f.mul(&g).unwrap().evaluate(&x).unwrap();
            let prod = f.evaluate(&x).unwrap() * g.evaluate(&x).unwrap();
            let scale = f.terms().map(|(v, k)| k.norm() * monomial_value(v, &x).norm()).sum::<f64>()
                * g.terms().map(|(v, k)| k.norm() * monomial_value(v, &x).norm()).sum::<f64>();
            prop_assert!((fg - prod).norm() <= 1e-10 * scale.max(1.0));
        }

        #[test]
        fn newton_polytope_of_product((f, g) in (1usize..=3).prop_flat_map(|d| (rational_poly(d), rational_poly(d)))) {
            let lhs = f.mul(&g).unwrap().newton_polytope().unwrap();
            let rhs = minkowski_sum(&f.newton_polytope().unwrap(), &g.newton_polytope().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn shift_preserves_torus_zeros((f, x) in (1usize..=3).prop_flat_map(|d| (complex_poly(d), torus_point(d)))) {
            let g = f.shift_to_origin().unwrap();
            prop_assert!(g.leading_exponent().unwrap().is_origin());
            // g = x^{-v} f at every torus point
            let v = f.leading_exponent().unwrap();
            let lhs = g.evaluate(&x).unwrap() * monomial_value(v, &x);
            let rhs = f.evaluate(&x).unwrap();
            let scale: f64 = f.terms().map(|(w, k)| k.norm() * monomial_value(w, &x).norm()).sum();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale.max(1.0));
        }
    }
}
