use std::collections::BTreeSet;

use proptest::prelude::*;
use sparse_eigsolve::lattice::{convex_hull, dilate, lattice_points, minkowski_sum, LatticePoint, Polytope};
use sparse_eigsolve::oracle::brute_lattice_points;

fn point_set(dim: usize, range: i64) -> impl Strategy<Value = Vec<LatticePoint>> {
    prop::collection::vec(prop::collection::vec(-range..=range, dim), 1..8)
        .prop_map(|v| v.into_iter().map(LatticePoint::new).collect())
}

fn any_point_set() -> impl Strategy<Value = Vec<LatticePoint>> {
    (1usize..=3).prop_flat_map(|d| point_set(d, 3))
}

fn vertex_set(p: &Polytope) -> BTreeSet<LatticePoint> {
    p.vertices().iter().cloned().collect()
}

fn sorted(mut v: Vec<LatticePoint>) -> Vec<LatticePoint> {
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enumeration_matches_linear_programming(pts in any_point_set()) {
        let p = convex_hull(&pts).unwrap();
        prop_assert_eq!(sorted(lattice_points(&p)), sorted(brute_lattice_points(&p)));
    }

    #[test]
    fn hull_is_idempotent(pts in any_point_set()) {
        let p = convex_hull(&pts).unwrap();
        let q = convex_hull(p.vertices()).unwrap();
        prop_assert_eq!(vertex_set(&p), vertex_set(&q));
        prop_assert_eq!(p.affine_dim(), q.affine_dim());
    }

    #[test]
    fn input_points_lie_in_hull(pts in any_point_set()) {
        let p = convex_hull(&pts).unwrap();
        for x in &pts {
            prop_assert!(p.contains(x));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn sumset_lies_in_dilation(pts in (1usize..=3).prop_flat_map(|d| point_set(d, 2))) {
        let p = convex_hull(&pts).unwrap();
        let a = lattice_points(&p);
        let twice: BTreeSet<LatticePoint> = lattice_points(&dilate(&p, 2).unwrap()).into_iter().collect();
        for u in &a {
            for v in &a {
                prop_assert!(twice.contains(&(u + v)));
            }
        }
    }

    #[test]
    fn minkowski_vertices_are_sums_of_vertices(
        (a, b) in (1usize..=3).prop_flat_map(|d| (point_set(d, 2), point_set(d, 2)))
    ) {
        let (p, q) = (convex_hull(&a).unwrap(), convex_hull(&b).unwrap());
        let s = minkowski_sum(&p, &q).unwrap();
        let sums: BTreeSet<LatticePoint> =
            p.vertices().iter().flat_map(|u| q.vertices().iter().map(move |v| u + v)).collect();
        for v in s.vertices() {
            prop_assert!(sums.contains(v));
        }
        for u in &sums {
            prop_assert!(s.contains(u));
        }
    }
}
