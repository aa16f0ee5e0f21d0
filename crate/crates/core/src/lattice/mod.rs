//! Exact integer geometry of Newton polytopes.
//!
//! Everything here is exact: points and facet normals are integers, volumes
//! are rationals. Floating point never enters this module.

mod hull;
mod volume;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Index, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use volume::simplex_volume;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("empty point set")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dilation factor must be at least 1, got {0}")]
    InvalidDilation(i64),
    #[error("mixed volume in dimension {dim} needs {dim} polytopes, got {found}")]
    WrongPolytopeCount { dim: usize, found: usize },
    #[error("integer overflow in exact hull arithmetic")]
    Overflow,
    #[error("degenerate point configuration")]
    Degenerate,
}

/// An exponent vector. Entries may be negative.
///
/// Ordering is lexicographic, which fixes every enumeration order in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn origin(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn unit(dim: usize, j: usize) -> Self {
        let mut v = vec![0; dim];
        v[j] = 1;
        LatticePoint(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticePoint(self.0.iter().map(|x| x * k).collect())
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Index<usize> for LatticePoint {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// `{x : <normal, x> <= offset}` with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Halfspace {
    pub fn value(&self, p: &LatticePoint) -> i128 {
        self.normal.iter().zip(p.coords()).map(|(&a, &x)| a as i128 * x as i128).sum()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.value(p) <= self.offset as i128
    }

    pub fn is_tight(&self, p: &LatticePoint) -> bool {
        self.value(p) == self.offset as i128
    }
}

/// Convex hull of finitely many lattice points.
///
/// Both descriptions are kept: the extreme points (sorted) and the facet
/// inequalities, plus the affine hull as equations when the polytope is not
/// full-dimensional. Equality compares vertex sets only.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<LatticePoint>,
    facets: Vec<Halfspace>,
    equalities: Vec<(Vec<i64>, i64)>,
    affine_dim: usize,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    /// Equations `<a, x> = b` cutting out the affine hull.
    pub fn equalities(&self) -> &[(Vec<i64>, i64)] {
        &self.equalities
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    /// All halfspaces, with every equality expanded into two opposite ones.
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let mut out = self.facets.clone();
        for (a, b) in &self.equalities {
            out.push(Halfspace { normal: a.clone(), offset: *b });
            out.push(Halfspace { normal: a.iter().map(|x| -x).collect(), offset: -b });
        }
        out
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.dim() == self.dim
            && self.equalities.iter().all(|(a, b)| {
                a.iter().zip(p.coords()).map(|(&x, &y)| x as i128 * y as i128).sum::<i128>() == *b as i128
            })
            && self.facets.iter().all(|h| h.contains(p))
    }

    /// Containment of convex sets, decided on the vertices of `other`.
    pub fn contains_polytope(&self, other: &Polytope) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    fn from_hull(dim: usize, h: hull::HullData) -> Self {
        Polytope { dim, vertices: h.vertices, facets: h.facets, equalities: h.equalities, affine_dim: h.affine_dim }
    }

    /// Standard simplex scaled by `d`: `conv{0, d e_1, ..., d e_n}`.
    pub fn simplex(dim: usize, d: i64) -> Result<Polytope, LatticeError> {
        let mut pts = vec![LatticePoint::origin(dim)];
        pts.extend((0..dim).map(|j| LatticePoint::unit(dim, j).scale(d)));
        convex_hull(&pts)
    }

    /// Product `(d_1 Δ_{n_1}) × ... × (d_r Δ_{n_r})` in `Z^{n_1 + ... + n_r}`.
    pub fn simplex_product(blocks: &[usize], degrees: &[i64]) -> Result<Polytope, LatticeError> {
        assert_eq!(blocks.len(), degrees.len());
        let dim: usize = blocks.iter().sum();
        let mut pts = vec![Vec::new()];
        for (&n, &d) in blocks.iter().zip(degrees) {
            let mut block_vertices = vec![vec![0i64; n]];
            for j in 0..n {
                let mut v = vec![0; n];
                v[j] = d;
                block_vertices.push(v);
            }
            pts = pts
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    block_vertices.iter().map(move |b| {
                        let mut p = prefix.clone();
                        p.extend_from_slice(b);
                        p
                    })
                })
                .collect();
        }
        let pts: Vec<LatticePoint> = pts.into_iter().map(LatticePoint::new).collect();
        if dim == 0 {
            return convex_hull(&[LatticePoint::origin(0)]);
        }
        convex_hull(&pts)
    }
}

/// Convex hull of a nonempty point list; keeps extreme points only.
pub fn convex_hull(points: &[LatticePoint]) -> Result<Polytope, LatticeError> {
    let dim = points.first().ok_or(LatticeError::Empty)?.dim();
    Ok(Polytope::from_hull(dim, hull::hull(points)?))
}

fn check_dims(p: &Polytope, q: &Polytope) -> Result<(), LatticeError> {
    if p.dim != q.dim {
        return Err(LatticeError::DimensionMismatch { expected: p.dim, found: q.dim });
    }
    Ok(())
}

pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope, LatticeError> {
    check_dims(p, q)?;
    let sums: Vec<LatticePoint> = p.vertices.iter().flat_map(|a| q.vertices.iter().map(move |b| a + b)).collect();
    convex_hull(&sums)
}

/// `k * P`. Facets are rescaled in place; no hull recomputation.
pub fn dilate(p: &Polytope, k: i64) -> Result<Polytope, LatticeError> {
    if k < 1 {
        return Err(LatticeError::InvalidDilation(k));
    }
    Ok(Polytope {
        dim: p.dim,
        vertices: p.vertices.iter().map(|v| v.scale(k)).collect(),
        facets: p.facets.iter().map(|h| Halfspace { normal: h.normal.clone(), offset: h.offset * k }).collect(),
        equalities: p.equalities.iter().map(|(a, b)| (a.clone(), b * k)).collect(),
        affine_dim: p.affine_dim,
    })
}

/// Inclusive per-coordinate bounds of the vertex set.
pub fn bounding_box(p: &Polytope) -> (Vec<i64>, Vec<i64>) {
    let mut lo = p.vertices[0].coords().to_vec();
    let mut hi = lo.clone();
    for v in &p.vertices[1..] {
        for (j, &x) in v.coords().iter().enumerate() {
            lo[j] = lo[j].min(x);
            hi[j] = hi[j].max(x);
        }
    }
    (lo, hi)
}

/// Integer points of `P`, in lexicographic order.
///
/// Bounding-box scan; a coordinate prefix is abandoned as soon as an equality
/// whose support lies inside the prefix fails.
pub fn lattice_points(p: &Polytope) -> Vec<LatticePoint> {
    lattice_points_bounded(p, usize::MAX).expect("unbounded enumeration")
}

/// As [`lattice_points`], but gives up with `None` once more than `limit`
/// points have been found.
pub fn lattice_points_bounded(p: &Polytope, limit: usize) -> Option<Vec<LatticePoint>> {
    let (lo, hi) = bounding_box(p);
    let n = p.dim;
    if n == 0 {
        return Some(vec![LatticePoint::origin(0)]);
    }
    // equalities grouped by their last nonzero coordinate
    let mut eq_at: Vec<Vec<&(Vec<i64>, i64)>> = vec![Vec::new(); n];
    for e in &p.equalities {
        if let Some(last) = e.0.iter().rposition(|&x| x != 0) {
            eq_at[last].push(e);
        }
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    let mut depth = 0usize;
    // iterative odometer with prefix pruning
    loop {
        let ok = eq_at[depth].iter().all(|(a, b)| {
            a[..=depth].iter().zip(&cur).map(|(&x, &y)| x as i128 * y as i128).sum::<i128>() == *b as i128
        });
        if ok {
            if depth + 1 == n {
                let pt = LatticePoint::new(cur.clone());
                if p.facets.iter().all(|h| h.contains(&pt)) {
                    out.push(pt);
                    if out.len() > limit {
                        return None;
                    }
                }
            } else {
                depth += 1;
                cur[depth] = lo[depth];
                continue;
            }
        }
        // advance
        loop {
            if cur[depth] < hi[depth] {
                cur[depth] += 1;
                break;
            }
            if depth == 0 {
                return Some(out);
            }
            depth -= 1;
        }
    }
}

/// Number of candidates the bounding-box scan in [`lattice_points`] visits.
pub fn scan_size(p: &Polytope) -> u128 {
    let (lo, hi) = bounding_box(p);
    lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as u128).product()
}

/// Bounded normality test: for every `2 <= k <= kmax`, the integer points of
/// `kP` coincide with the `k`-fold sumset of the integer points of `P`.
///
/// A finite check only; passing it does not prove normality.
pub fn is_normal(p: &Polytope, kmax: u32) -> bool {
    let base = lattice_points(p);
    let mut sumset: BTreeSet<LatticePoint> = base.iter().cloned().collect();
    for k in 2..=kmax {
        sumset = sumset.iter().flat_map(|a| base.iter().map(move |b| a + b)).collect();
        let Ok(dk) = dilate(p, k as i64) else { return false };
        if lattice_points(&dk).len() != sumset.len() {
            return false;
        }
    }
    true
}

/// Euclidean volume in the ambient dimension; zero if not full-dimensional.
pub fn volume(p: &Polytope) -> BigRational {
    if !p.is_full_dimensional() {
        return BigRational::zero();
    }
    if p.dim == 0 {
        return BigRational::one();
    }
    let simplices = volume::triangulate(&p.vertices).expect("hull of hull vertices");
    simplices.iter().map(|s| simplex_volume(s)).fold(BigRational::zero(), |a, b| a + b)
}

/// Mixed volume, normalized so that `MV(Δ_n, ..., Δ_n) = 1`.
///
/// Computed by inclusion–exclusion over nonempty subsets. With this
/// normalization `MV(d_1 Δ_n, ..., d_n Δ_n) = d_1 ⋯ d_n`, the Bézout number,
/// and in general the count of isolated torus roots of a generic system.
pub fn mixed_volume(polys: &[Polytope]) -> Result<BigRational, LatticeError> {
    let n = polys.first().map(|p| p.dim).unwrap_or(0);
    if polys.len() != n || n == 0 {
        return Err(LatticeError::WrongPolytopeCount { dim: n, found: polys.len() });
    }
    for p in polys {
        check_dims(&polys[0], p)?;
    }
    let mut total = BigRational::zero();
    for mask in 1u32..(1 << n) {
        let mut acc: Option<Polytope> = None;
        for (i, p) in polys.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = Some(match acc {
                    None => p.clone(),
                    Some(a) => minkowski_sum(&a, p)?,
                });
            }
        }
        let v = volume(&acc.expect("nonempty mask"));
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            total += v;
        } else {
            total -= v;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c.to_vec())
    }

    fn hull_of(c: &[&[i64]]) -> Polytope {
        convex_hull(&c.iter().map(|x| pt(x)).collect::<Vec<_>>()).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn hull_examples() {
        assert_eq!(hull_of(&[&[0, 0], &[1, 1]]).vertices(), &[pt(&[0, 0]), pt(&[1, 1])]);
        assert_eq!(hull_of(&[&[0, 0]]).vertices(), &[pt(&[0, 0])]);
        let sq = hull_of(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[1, 0]]);
        assert_eq!(sq.vertices().len(), 4);
    }

    #[test]
    fn hull_rejects_mixed_dimensions() {
        assert_eq!(
            convex_hull(&[pt(&[0, 0]), pt(&[1])]).unwrap_err(),
            LatticeError::DimensionMismatch { expected: 2, found: 1 }
        );
        assert_eq!(convex_hull(&[]).unwrap_err(), LatticeError::Empty);
    }

    #[test]
    fn minkowski_examples() {
        let a = hull_of(&[&[0, 0], &[1, 1]]);
        let b = hull_of(&[&[0, 0], &[0, 1]]);
        let s = minkowski_sum(&a, &b).unwrap();
        assert_eq!(s.vertices(), &[pt(&[0, 0]), pt(&[0, 1]), pt(&[1, 1]), pt(&[1, 2])]);
        let origin = hull_of(&[&[0, 0]]);
        assert_eq!(minkowski_sum(&a, &origin).unwrap(), a);
        let d2 = Polytope::simplex(2, 1).unwrap();
        assert_eq!(minkowski_sum(&d2, &d2).unwrap(), Polytope::simplex(2, 2).unwrap());
        assert!(minkowski_sum(&a, &Polytope::simplex(3, 1).unwrap()).is_err());
    }

    #[test]
    fn dilate_examples() {
        let d2 = Polytope::simplex(2, 1).unwrap();
        assert_eq!(dilate(&d2, 2).unwrap().vertices(), &[pt(&[0, 0]), pt(&[0, 2]), pt(&[2, 0])]);
        assert_eq!(dilate(&d2, 1).unwrap(), d2);
        let seg = hull_of(&[&[0, 0], &[1, 1]]);
        assert_eq!(dilate(&seg, 3).unwrap().vertices(), &[pt(&[0, 0]), pt(&[3, 3])]);
        assert_eq!(dilate(&seg, 0).unwrap_err(), LatticeError::InvalidDilation(0));
    }

    #[test]
    fn lattice_point_examples() {
        let d2 = Polytope::simplex(2, 1).unwrap();
        assert_eq!(lattice_points(&d2), vec![pt(&[0, 0]), pt(&[0, 1]), pt(&[1, 0])]);
        assert_eq!(lattice_points(&Polytope::simplex(2, 2).unwrap()).len(), 6);
        // parallelogram of area 1: only its vertices
        let par = hull_of(&[&[0, 0], &[0, 1], &[1, 1], &[1, 2]]);
        assert_eq!(lattice_points(&par), vec![pt(&[0, 0]), pt(&[0, 1]), pt(&[1, 1]), pt(&[1, 2])]);
        // lower-dimensional: a diagonal segment in 3-space
        let seg = hull_of(&[&[0, 0, 0], &[2, 2, 2]]);
        assert_eq!(lattice_points(&seg).len(), 3);
    }

    #[test]
    fn normality_examples() {
        for n in 1..=3 {
            assert!(is_normal(&Polytope::simplex(n, 1).unwrap(), 3));
        }
        assert!(is_normal(&hull_of(&[&[-2], &[5]]), 4));
        let reeve = hull_of(&[&[0, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        assert!(!is_normal(&reeve, 2));
        let doubled = dilate(&reeve, 2).unwrap();
        assert!(lattice_points(&doubled).contains(&pt(&[1, 1, 1])));
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume(&Polytope::simplex(2, 1).unwrap()), rat(1, 2));
        assert_eq!(volume(&hull_of(&[&[0, 0], &[1, 1]])), rat(0, 1));
        assert_eq!(volume(&hull_of(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])), rat(1, 1));
        assert_eq!(volume(&Polytope::simplex(3, 2).unwrap()), rat(8, 6));
    }

    #[test]
    fn mixed_volume_examples() {
        let a = hull_of(&[&[0, 0], &[1, 1]]);
        let b = hull_of(&[&[0, 0], &[0, 1]]);
        assert_eq!(mixed_volume(&[a, b]).unwrap(), rat(1, 1));
        let d = Polytope::simplex(2, 1).unwrap();
        assert_eq!(mixed_volume(&[d.clone(), d.clone()]).unwrap(), rat(1, 1));
        let (d2, d3) = (Polytope::simplex(2, 2).unwrap(), Polytope::simplex(2, 3).unwrap());
        assert_eq!(mixed_volume(&[d2, d3]).unwrap(), rat(6, 1));
        assert!(matches!(mixed_volume(&[d]), Err(LatticeError::WrongPolytopeCount { .. })));
    }

    #[test]
    fn simplex_product_shape() {
        let p = Polytope::simplex_product(&[2, 1, 1], &[1, 1, 1]).unwrap();
        assert_eq!(p.vertices().len(), 3 * 2 * 2);
        assert_eq!(lattice_points(&p).len(), 12);
        let p = Polytope::simplex_product(&[2, 2], &[3, 2]).unwrap();
        assert_eq!(lattice_points(&p).len(), 10 * 6);
    }
}
