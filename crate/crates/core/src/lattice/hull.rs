//! Exact convex hulls of integer point sets.
//!
//! The facet description is computed with the double description method on
//! the homogenized cone `{(1, y)}` inside the affine hull of the input. All
//! arithmetic is on `i128` with gcd normalization after every combination,
//! so normals stay primitive and small for lattice polytopes.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use super::{Halfspace, LatticeError, LatticePoint};

/// Raw output of [`hull`]: extreme points, facet inequalities valid inside the
/// affine hull, and the affine hull itself as integer equations.
#[derive(Clone, Debug)]
pub(crate) struct HullData {
    pub vertices: Vec<LatticePoint>,
    pub facets: Vec<Halfspace>,
    pub equalities: Vec<(Vec<i64>, i64)>,
    pub affine_dim: usize,
}

fn overflow() -> LatticeError {
    LatticeError::Overflow
}

fn gcd_normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128, LatticeError> {
    a.iter()
        .zip(b)
        .try_fold(0i128, |acc, (x, y)| x.checked_mul(*y).and_then(|p| acc.checked_add(p)).ok_or_else(overflow))
}

/// Fraction-free incremental row echelon form used to detect affine rank.
struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    /// Reduces `v` against the current rows. Returns the reduced vector.
    fn reduce(&self, mut v: Vec<i128>) -> Result<Vec<i128>, LatticeError> {
        for (piv, row) in &self.rows {
            let a = v[*piv];
            if a == 0 {
                continue;
            }
            let b = row[*piv];
            let g = a.gcd(&b);
            let (fa, fb) = (b / g, a / g);
            for (x, r) in v.iter_mut().zip(row) {
                *x = x
                    .checked_mul(fa)
                    .zip(r.checked_mul(fb))
                    .and_then(|(p, q)| p.checked_sub(q))
                    .ok_or_else(overflow)?;
            }
            gcd_normalize(&mut v);
        }
        Ok(v)
    }

    /// Inserts `v` if it is independent of the rows so far.
    fn insert(&mut self, v: Vec<i128>) -> Result<bool, LatticeError> {
        let v = self.reduce(v)?;
        match v.iter().position(|x| *x != 0) {
            Some(piv) => {
                self.rows.push((piv, v));
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Integer basis of the orthogonal complement of the row space of `rows`.
fn integer_nullspace(rows: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    type Q = Ratio<i128>;
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x)).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m.len() {
            break;
        }
        let Some(sel) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, sel);
        let p = m[row][col];
        for x in m[row].iter_mut() {
            *x /= p;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); n];
        v[free] = Q::from_integer(1);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free];
        }
        let l = v.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
        let mut iv: Vec<i128> = v.iter().map(|x| (x * Q::from_integer(l)).to_integer()).collect();
        gcd_normalize(&mut iv);
        out.push(iv);
    }
    out
}

fn to_i64(v: i128) -> Result<i64, LatticeError> {
    i64::try_from(v).map_err(|_| overflow())
}

#[derive(Clone)]
struct Ray {
    v: Vec<i128>,
    tight: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn popcount(bits: &[u64]) -> u32 {
    bits.iter().map(|w| w.count_ones()).sum()
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Extreme rays of `{c : c·h >= 0 for all h in gens}` for a full-dimensional
/// pointed configuration. `init` indexes `d` linearly independent generators.
fn double_description(gens: &[Vec<i128>], init: &[usize]) -> Result<Vec<Vec<i128>>, LatticeError> {
    type Q = Ratio<i128>;
    let d = gens[0].len();
    let words = gens.len().div_ceil(64);

    // Initial simplicial cone: columns of the inverse of the init matrix.
    let mut a: Vec<Vec<Q>> = init
        .iter()
        .enumerate()
        .map(|(r, &i)| {
            let mut row: Vec<Q> = gens[i].iter().map(|&x| Q::from_integer(x)).collect();
            row.extend((0..d).map(|j| Q::from_integer(i128::from(j == r))));
            row
        })
        .collect();
    for col in 0..d {
        let sel = (col..d).find(|&r| !a[r][col].is_zero()).ok_or(LatticeError::Degenerate)?;
        a.swap(col, sel);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    let mut processed = vec![false; gens.len()];
    let mut rays: Vec<Ray> = Vec::with_capacity(d);
    for j in 0..d {
        let col: Vec<Q> = (0..d).map(|r| a[r][d + j]).collect();
        let l = col.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
        let mut v: Vec<i128> = col.iter().map(|x| (x * Q::from_integer(l)).to_integer()).collect();
        gcd_normalize(&mut v);
        rays.push(Ray { v, tight: vec![0; words] });
    }
    for &i in init {
        processed[i] = true;
        for ray in rays.iter_mut() {
            if dot(&ray.v, &gens[i])? == 0 {
                bit_set(&mut ray.tight, i);
            }
        }
    }

    for (idx, h) in gens.iter().enumerate() {
        if processed[idx] {
            continue;
        }
        let signs: Vec<i128> = rays.iter().map(|r| dot(&r.v, h)).collect::<Result<_, _>>()?;
        if signs.iter().all(|s| *s >= 0) {
            for (ray, s) in rays.iter_mut().zip(&signs) {
                if *s == 0 {
                    bit_set(&mut ray.tight, idx);
                }
            }
            processed[idx] = true;
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| signs[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| signs[i] < 0).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<u64> = rays[p].tight.iter().zip(&rays[n].tight).map(|(x, y)| x & y).collect();
                if (popcount(&common) as usize) + 2 < d {
                    continue;
                }
                let adjacent =
                    (0..rays.len()).filter(|&o| o != p && o != n).all(|o| !is_subset(&common, &rays[o].tight));
                if !adjacent {
                    continue;
                }
                let (sp, sn) = (signs[p], signs[n]);
                let mut v = Vec::with_capacity(d);
                for (x, y) in rays[n].v.iter().zip(&rays[p].v) {
                    let t = sp
                        .checked_mul(*x)
                        .zip(sn.checked_mul(*y))
                        .and_then(|(a, b)| a.checked_sub(b))
                        .ok_or_else(overflow)?;
                    v.push(t);
                }
                gcd_normalize(&mut v);
                let mut tight = common;
                bit_set(&mut tight, idx);
                fresh.push(Ray { v, tight });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut ray, s) in rays.into_iter().zip(signs) {
            if s > 0 {
                next.push(ray);
            } else if s == 0 {
                bit_set(&mut ray.tight, idx);
                next.push(ray);
            }
        }
        next.extend(fresh);
        rays = next;
        processed[idx] = true;
    }
    let mut out: Vec<Vec<i128>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Convex hull of a nonempty set of points of a common dimension.
pub(crate) fn hull(points: &[LatticePoint]) -> Result<HullData, LatticeError> {
    let first = points.first().ok_or(LatticeError::Empty)?;
    let n = first.dim();
    if let Some(bad) = points.iter().find(|p| p.dim() != n) {
        return Err(LatticeError::DimensionMismatch { expected: n, found: bad.dim() });
    }
    let mut pts: Vec<LatticePoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    let base = pts[0].clone();
    let base128: Vec<i128> = base.coords().iter().map(|&x| x as i128).collect();

    let mut ech = Echelon::new();
    let mut init = vec![0usize];
    for (i, p) in pts.iter().enumerate().skip(1) {
        let diff: Vec<i128> = p.coords().iter().zip(&base128).map(|(&x, b)| x as i128 - b).collect();
        if ech.insert(diff)? {
            init.push(i);
        }
    }
    let r = ech.rank();
    let basis_rows: Vec<Vec<i128>> = ech.rows.iter().map(|(_, row)| row.clone()).collect();
    let mut equalities = Vec::new();
    for a in integer_nullspace(&basis_rows, n) {
        let off = dot(&a, &base128)?;
        let a64 = a.into_iter().map(to_i64).collect::<Result<Vec<_>, _>>()?;
        equalities.push((a64, to_i64(off)?));
    }
    if r == 0 {
        return Ok(HullData { vertices: vec![base], facets: Vec::new(), equalities, affine_dim: 0 });
    }

    // Coordinates onto which the affine hull projects injectively.
    let mut pivots: Vec<usize> = Vec::new();
    {
        let mut cols = Vec::new();
        let mut rows: Vec<Vec<i128>> = basis_rows.clone();
        let mut rk = 0;
        for c in 0..n {
            if let Some(sel) = (rk..rows.len()).find(|&i| rows[i][c] != 0) {
                rows.swap(rk, sel);
                let pr = rows[rk].clone();
                for i in 0..rows.len() {
                    if i != rk && rows[i][c] != 0 {
                        let (a, b) = (rows[i][c], pr[c]);
                        let g = a.gcd(&b);
                        let (fa, fb) = (b / g, a / g);
                        for (x, y) in rows[i].iter_mut().zip(&pr) {
                            *x = x
                                .checked_mul(fa)
                                .zip(y.checked_mul(fb))
                                .and_then(|(p, q)| p.checked_sub(q))
                                .ok_or_else(overflow)?;
                        }
                        gcd_normalize(&mut rows[i]);
                    }
                }
                cols.push(c);
                rk += 1;
            }
        }
        pivots.extend(cols);
    }
    debug_assert_eq!(pivots.len(), r);

    let gens: Vec<Vec<i128>> = pts
        .iter()
        .map(|p| {
            let mut h = Vec::with_capacity(r + 1);
            h.push(1i128);
            h.extend(pivots.iter().map(|&c| p.coords()[c] as i128));
            h
        })
        .collect();
    let rays = double_description(&gens, &init)?;

    let mut facets = Vec::with_capacity(rays.len());
    for ray in &rays {
        let mut normal = vec![0i64; n];
        for (t, &c) in pivots.iter().enumerate() {
            normal[c] = to_i64(-ray[t + 1])?;
        }
        facets.push(Halfspace { normal, offset: to_i64(ray[0])? });
    }
    facets.sort();
    facets.dedup();

    let mut vertices = Vec::new();
    for (p, h) in pts.iter().zip(&gens) {
        let mut e = Echelon::new();
        for ray in &rays {
            if dot(ray, h)? == 0 {
                e.insert(ray[1..].to_vec())?;
                if e.rank() == r {
                    break;
                }
            }
        }
        if e.rank() == r {
            vertices.push(p.clone());
        }
    }
    Ok(HullData { vertices, facets, equalities, affine_dim: r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|c| LatticePoint::new(c.to_vec())).collect()
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let h = hull(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[1, 0]])).unwrap();
        assert_eq!(h.vertices, pts(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]]));
        assert_eq!(h.facets.len(), 4);
        assert!(h.equalities.is_empty());
    }

    #[test]
    fn segment_in_space_has_equalities() {
        let h = hull(&pts(&[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2]])).unwrap();
        assert_eq!(h.affine_dim, 1);
        assert_eq!(h.vertices, pts(&[&[0, 0, 0], &[2, 2, 2]]));
        assert_eq!(h.equalities.len(), 2);
        assert_eq!(h.facets.len(), 2);
    }

    #[test]
    fn cube_facets() {
        let mut v = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    v.push(LatticePoint::new(vec![a, b, c]));
                }
            }
        }
        let h = hull(&v).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.facets.len(), 6);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = vec![vec![1, 2, 3], vec![0, 1, 1]];
        let ns = integer_nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert_eq!(dot(r, &ns[0]).unwrap(), 0);
        }
    }
}
