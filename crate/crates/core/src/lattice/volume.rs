//! Pulling triangulation and exact simplex volumes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{hull, LatticeError, LatticePoint};

/// Triangulates `conv(vertices)` by pulling its lexicographically smallest
/// vertex and recursing into the facets that avoid it. Each simplex has
/// `affine_dim + 1` points.
pub(crate) fn triangulate(vertices: &[LatticePoint]) -> Result<Vec<Vec<LatticePoint>>, LatticeError> {
    let h = hull::hull(vertices)?;
    let apex = h.vertices[0].clone();
    if h.affine_dim == 0 {
        return Ok(vec![vec![apex]]);
    }
    let mut out = Vec::new();
    for facet in &h.facets {
        if facet.is_tight(&apex) {
            continue;
        }
        let on_facet: Vec<LatticePoint> = h.vertices.iter().filter(|v| facet.is_tight(v)).cloned().collect();
        for mut simplex in triangulate(&on_facet)? {
            simplex.insert(0, apex.clone());
            out.push(simplex);
        }
    }
    Ok(out)
}

/// Determinant by Bareiss elimination; exact.
fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone() * sign
}

/// Euclidean volume of a full-dimensional simplex given by `n + 1` points.
pub fn simplex_volume(points: &[LatticePoint]) -> BigRational {
    let n = points[0].dim();
    assert_eq!(points.len(), n + 1, "simplex needs n + 1 points");
    let base = &points[0];
    let rows: Vec<Vec<BigInt>> =
        points[1..].iter().map(|p| (p - base).coords().iter().map(|&x| BigInt::from(x)).collect()).collect();
    let fact: BigInt = (1..=n as u64).map(BigInt::from).product();
    BigRational::new(det(rows).abs(), fact)
}
