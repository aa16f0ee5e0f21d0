use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{LatticePoint, Polytope};

/// Integer points of `P`, by scanning the vertex bounding box and testing
/// each point with an exact linear program over the vertex list.
pub fn brute_lattice_points(p: &Polytope) -> Vec<LatticePoint> {
    let verts = p.vertices();
    let Some(first) = verts.first() else {
        return Vec::new();
    };
    let dim = first.dim();
    let mut lo = first.coords().to_vec();
    let mut hi = lo.clone();
    for v in verts {
        for j in 0..dim {
            lo[j] = lo[j].min(v.coords()[j]);
            hi[j] = hi[j].max(v.coords()[j]);
        }
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        let x = LatticePoint::new(cur.clone());
        if in_convex_hull(verts, &x) {
            out.push(x);
        }
        let mut j = dim;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] < hi[j] {
                cur[j] += 1;
                break;
            }
            cur[j] = lo[j];
        }
    }
}

/// Whether `x` is a convex combination of `points`.
///
/// Phase one of the simplex method on `Σ λ_i v_i = x, Σ λ_i = 1, λ ≥ 0`, in
/// exact rational arithmetic with Bland's rule.
pub fn in_convex_hull(points: &[LatticePoint], x: &LatticePoint) -> bool {
    if points.is_empty() || points.iter().any(|p| p.dim() != x.dim()) {
        return false;
    }
    let k = points.len();
    let m = x.dim() + 1;
    let width = k + m + 1;
    let rat = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|r| {
            let mut row = vec![BigRational::zero(); width];
            for (i, p) in points.iter().enumerate() {
                row[i] = if r < m - 1 { rat(p.coords()[r]) } else { BigRational::one() };
            }
            row[k + r] = BigRational::one();
            row[width - 1] = if r < m - 1 { rat(x.coords()[r]) } else { BigRational::one() };
            if row[width - 1].is_negative() {
                for (c, v) in row.iter_mut().enumerate() {
                    if !(k..k + m).contains(&c) {
                        *v = -v.clone();
                    }
                }
            }
            row
        })
        .collect();
    let mut basis: Vec<usize> = (k..k + m).collect();
    let mut cost = vec![BigRational::zero(); width];
    for row in &t {
        for c in (0..k).chain([width - 1]) {
            cost[c] -= &row[c];
        }
    }
    while let Some(enter) = (0..k + m).find(|&c| cost[c].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..m {
            if !t[r][enter].is_positive() {
                continue;
            }
            let ratio = &t[r][width - 1] / &t[r][enter];
            let better = match &leave {
                None => true,
                Some((lr, lratio)) => ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((r, _)) = leave else {
            break;
        };
        let piv = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        let f = cost[enter].clone();
        for (v, p) in cost.iter_mut().zip(&pivot_row) {
            *v -= &f * p;
        }
        basis[r] = enter;
    }
    cost[width - 1].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::convex_hull;

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|c| LatticePoint::new(c.to_vec())).collect()
    }

    #[test]
    fn unit_triangle() {
        let p = Polytope::simplex(2, 1).unwrap();
        assert_eq!(brute_lattice_points(&p).len(), 3);
    }

    #[test]
    fn segment_without_interior_points() {
        let p = convex_hull(&pts(&[&[0, 0], &[2, 1]])).unwrap();
        let got = brute_lattice_points(&p);
        assert_eq!(got, pts(&[&[0, 0], &[2, 1]]));
    }

    #[test]
    fn membership() {
        let square = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        assert!(in_convex_hull(&square, &LatticePoint::new(vec![1, 1])));
        assert!(in_convex_hull(&square, &LatticePoint::new(vec![2, 1])));
        assert!(!in_convex_hull(&square, &LatticePoint::new(vec![3, 1])));
        assert!(!in_convex_hull(&square, &LatticePoint::new(vec![-1, 0])));
    }

    #[test]
    fn dilated_tetrahedron_count() {
        let p = Polytope::simplex(3, 3).unwrap();
        assert_eq!(brute_lattice_points(&p).len(), 20);
    }
}
