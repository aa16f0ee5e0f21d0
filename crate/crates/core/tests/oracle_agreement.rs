use num_complex::Complex64;
use sparse_eigsolve::adapters::dense_system;
use sparse_eigsolve::lattice::LatticePoint;
use sparse_eigsolve::laurent::LaurentPoly;
use sparse_eigsolve::oracle::{bivariate_solve, equation_residuals};
use sparse_eigsolve::solver::{solve_spec, solve_system, SolveOptions};

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm() / (1.0 + y.norm())).fold(0.0, f64::max)
}

/// Greedy nearest matching; returns the worst matched distance.
fn match_sets(ours: &[Vec<Complex64>], theirs: &[[Complex64; 2]]) -> Option<f64> {
    if ours.len() != theirs.len() {
        return None;
    }
    let mut used = vec![false; theirs.len()];
    let mut worst = 0.0f64;
    for p in ours {
        let (j, d) = theirs
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, q)| (j, dist(p, q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

#[test]
fn dense_systems_match_resultant_oracle() {
    for (d1, d2) in [(2, 2), (2, 3), (3, 3)] {
        for seed in 0..5 {
            let spec = dense_system(1, &[d1, d2], 2, seed).unwrap();
            let sol = solve_spec(&spec, &SolveOptions::default()).unwrap();
            assert_eq!(sol.rank22, sol.q);
            let eqs = spec.equations();
            let oracle = bivariate_solve(&eqs[0], &eqs[1]).unwrap();
            assert_eq!(oracle.len(), (d1 * d2) as usize, "oracle count for ({d1},{d2}) seed {seed}");
            let ours: Vec<Vec<Complex64>> = sol.accepted.iter().map(|c| c.point.clone()).collect();
            let worst = match_sets(&ours, &oracle)
                .unwrap_or_else(|| panic!("({d1},{d2}) seed {seed}: {} vs {} roots", ours.len(), oracle.len()));
            assert!(worst < 1e-6, "({d1},{d2}) seed {seed}: worst distance {worst:e}");
        }
    }
}

#[test]
fn accepted_points_pass_independent_residual_audit() {
    for seed in 0..3 {
        let spec = dense_system(1, &[3, 2], 2, 40 + seed).unwrap();
        let sol = solve_spec(&spec, &SolveOptions::default()).unwrap();
        for c in &sol.accepted {
            let r = equation_residuals(spec.equations(), &c.point).unwrap();
            assert!(r.iter().all(|&v| v < sol.threshold), "{r:?} vs {}", sol.threshold);
        }
    }
}

#[test]
fn introductory_example_agrees() {
    let t = |v: [i64; 2], c: f64| (LatticePoint::new(v.to_vec()), Complex64::new(c, 0.0));
    let f1 = LaurentPoly::from_terms(2, [t([0, 0], 1.0), t([1, 1], -1.0)]).unwrap();
    let f2 = LaurentPoly::from_terms(2, [t([0, 0], 1.0), t([0, 1], -1.0)]).unwrap();
    let oracle = bivariate_solve(&f1, &f2).unwrap();
    let (_, sol) = solve_system(vec![f1, f2], None, 5, &SolveOptions::default()).unwrap();
    let ours: Vec<Vec<Complex64>> = sol.accepted.iter().map(|c| c.point.clone()).collect();
    assert!(match_sets(&ours, &oracle).unwrap() < 1e-8);
}
