use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use super::trilinear::{chart_form, trilinear_system, TrilinearSpec};
use super::{AdapterError, Tensor3};
use crate::assembly::{normalize_spec, AssemblyError, SystemSpec};
use crate::lattice::LatticePoint;
use crate::laurent::LaurentPoly;
use crate::solver::{default_aux, solve_spec, Solution, SolveError, SolveOptions};

/// Tensors of the forms `ℓ(x_j e_i − x_i e_j, y, z)` for `i < j`, then the
/// same along `y` and `z`.
pub fn commutator_tensors(t: &Tensor3) -> Vec<Tensor3> {
    let dims = t.dims();
    let mut out = Vec::new();
    for axis in 0..3 {
        for i in 0..dims[axis] {
            for j in i + 1..dims[axis] {
                let mut c = Tensor3::zeros(dims);
                for a in 0..dims[0] {
                    for b in 0..dims[1] {
                        for d in 0..dims[2] {
                            let idx = [a, b, d];
                            // coefficient of w_j·(…) is a[i], of w_i·(…) is −a[j]
                            let mut si = idx;
                            let mut sj = idx;
                            match idx[axis] {
                                x if x == j => si[axis] = i,
                                x if x == i => sj[axis] = j,
                                _ => continue,
                            }
                            let v =
                                if idx[axis] == j { t.get(si[0], si[1], si[2]) } else { -t.get(sj[0], sj[1], sj[2]) };
                            *c.get_mut(a, b, d) = v;
                        }
                    }
                }
                out.push(c);
            }
        }
    }
    out
}

fn homogeneous_form(t: &Tensor3) -> LaurentPoly {
    let [n1, n2, n3] = t.dims();
    let dim = n1 + n2 + n3;
    let mut terms = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            for k in 0..n3 {
                let v = t.get(i, j, k);
                if v != 0.0 {
                    let mut e = vec![0i64; dim];
                    e[i] = 1;
                    e[n1 + j] = 1;
                    e[n1 + n2 + k] = 1;
                    terms.push((LatticePoint::new(e), Complex64::new(v, 0.0)));
                }
            }
        }
    }
    LaurentPoly::from_terms(dim, terms).expect("finite entries")
}

fn sphere(dim: usize, start: usize, len: usize) -> LaurentPoly {
    let mut terms = vec![(LatticePoint::origin(dim), Complex64::new(-1.0, 0.0))];
    for i in start..start + len {
        terms.push((LatticePoint::unit(dim, i).scale(2), Complex64::new(1.0, 0.0)));
    }
    LaurentPoly::from_terms(dim, terms).expect("finite")
}

/// Critical-point equations of `ℓ` on the product of unit spheres, in the
/// homogeneous variables `x0..xn, y0..ym, z0..zs`: every commutator equation
/// and the three sphere equations, with `f0 = ℓ`.
pub fn lagrange_system(t: &Tensor3) -> Result<SystemSpec, AdapterError> {
    if t.is_zero() {
        return Err(AdapterError::ZeroTensor);
    }
    let [n1, n2, n3] = t.dims();
    let dim = n1 + n2 + n3;
    let mut eqs: Vec<LaurentPoly> = commutator_tensors(t).iter().map(homogeneous_form).collect();
    eqs.push(sphere(dim, 0, n1));
    eqs.push(sphere(dim, n1, n2));
    eqs.push(sphere(dim, n1 + n2, n3));
    Ok(normalize_spec(homogeneous_form(t), eqs)?)
}

/// The same critical points in the affine chart `x0 = y0 = z0 = 1`: only the
/// commutator equations remain, each of multidegree `(1, 1, 1)`.
pub fn lagrange_chart(t: &Tensor3) -> Result<TrilinearSpec, AdapterError> {
    if t.is_zero() {
        return Err(AdapterError::ZeroTensor);
    }
    let [n1, n2, n3] = t.dims();
    let eqs: Vec<LaurentPoly> = commutator_tensors(t).iter().map(chart_form).filter(|f| !f.is_zero()).collect();
    TrilinearSpec::new([n1 - 1, n2 - 1, n3 - 1], eqs)
}

/// Options for [`trilinear_max_with`].
#[derive(Clone, Debug)]
pub struct TrilinearMaxOptions {
    /// Seeds the factor rotations and any fallback `f0`.
    pub seed: u64,
    pub solve: SolveOptions,
    /// First row multidegree tried.
    pub start: [i64; 3],
    /// Largest `|Im|` (relative to `max(1, |x_i|)`) of a real critical point.
    pub imag_tol: f64,
    /// Apply random orthogonal changes of coordinates before solving.
    pub rotate: bool,
}

/// Polish window for critical points. Chart coordinates of some critical
/// points are large, which leaves extracted candidates far above the threshold
/// until refined; identification still decides acceptance.
pub const TRILINEAR_POLISH_WINDOW: f64 = 1e6;

impl Default for TrilinearMaxOptions {
    fn default() -> Self {
        TrilinearMaxOptions {
            seed: 0,
            solve: SolveOptions { polish_window: TRILINEAR_POLISH_WINDOW, ..SolveOptions::default() },
            start: [2, 2, 2],
            imag_tol: 1e-6,
            rotate: true,
        }
    }
}

/// First singular value of a trilinear form and a maximizer.
#[derive(Clone, Debug)]
pub struct TrilinearMax {
    /// `max |ℓ(x, y, z)|` over unit vectors.
    pub value: f64,
    /// Unit maximizer with `ℓ(x, y, z) = value`.
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    /// Row multidegree at which `rank(M22) = q` first held.
    pub multidegree: [i64; 3],
    /// Accepted critical points, real or not.
    pub critical_points: usize,
    pub real_critical_points: usize,
    /// Whether the generic linear `f0` had to replace `ℓ`.
    pub fallback_aux: bool,
    /// Multidegrees tried before success, with the reason each failed.
    pub attempts: Vec<([i64; 3], String)>,
    pub solution: Option<Solution>,
}

/// Haar-like random orthogonal matrix via Gram–Schmidt on Gaussian columns.
/// Row-major.
pub fn random_orthogonal(n: usize, rng: &mut ChaCha20Rng) -> Vec<Vec<f64>> {
    loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut ok = true;
        for _ in 0..n {
            let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
            for _ in 0..2 {
                for c in &cols {
                    let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
                }
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|a| *a /= norm);
            cols.push(v);
        }
        if ok {
            return (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
        }
    }
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.iter().map(|a| a / n).collect()
}

/// [`trilinear_max_with`] with default options and the given seed.
pub fn trilinear_max(t: &Tensor3, seed: u64) -> Result<TrilinearMax, AdapterError> {
    trilinear_max_with(t, &TrilinearMaxOptions { seed, ..TrilinearMaxOptions::default() })
}

/// `max |ℓ(x, y, z)|` over `‖x‖ = ‖y‖ = ‖z‖ = 1`.
///
/// Solves the commutator equations in the chart `x0 = y0 = z0 = 1` with
/// `f0 = ℓ`, after a seeded orthogonal change of coordinates in each factor so
/// that no critical point sits at infinity of the chart. The row multidegree
/// starts at `start` and grows one block at a time, last block first, until
/// `rank(M22) = q` certifies that every critical point has been captured.
/// Each real accepted critical point is scored by `|ℓ|` after normalizing to
/// the unit spheres, and the best is mapped back to the original coordinates.
pub fn trilinear_max_with(t: &Tensor3, opts: &TrilinearMaxOptions) -> Result<TrilinearMax, AdapterError> {
    if t.is_zero() {
        return Err(AdapterError::ZeroTensor);
    }
    let dims = t.dims();
    let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
    let q: Vec<Vec<Vec<f64>>> = dims
        .iter()
        .map(|&n| {
            if opts.rotate {
                random_orthogonal(n, &mut rng)
            } else {
                (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect()
            }
        })
        .collect();
    let rotated = t.transform([&q[0], &q[1], &q[2]]);
    if dims.iter().all(|&d| d == 1) {
        let v = rotated.get(0, 0, 0);
        return Ok(TrilinearMax {
            value: v.abs(),
            x: vec![v.signum() * q[0][0][0]],
            y: vec![q[1][0][0]],
            z: vec![q[2][0][0]],
            multidegree: [0; 3],
            critical_points: 1,
            real_critical_points: 1,
            fallback_aux: false,
            attempts: Vec::new(),
            solution: None,
        });
    }
    let chart = lagrange_chart(&rotated)?;
    let form = chart_form(&rotated);
    let blocks = chart.blocks();
    let growable: Vec<usize> = (0..3).rev().filter(|&b| blocks[b] > 0).collect();
    let mut degree = opts.start;
    let mut attempts = Vec::new();
    let mut step = 0usize;
    loop {
        let sys = trilinear_system(&chart, Some(form.clone()), opts.seed, Some(degree))?;
        match solve_spec(&sys, &opts.solve) {
            Ok(sol) => {
                if let Some(best) = best_real(&rotated, &sol, opts.imag_tol) {
                    return Ok(finish(best, &q, &rotated, sol, degree, false, attempts, opts.imag_tol));
                }
                // ℓ may collide at distinct critical points; retry with a generic f0
                let aux = default_aux(chart.dim(), opts.seed ^ 0x5eed);
                let sys = trilinear_system(&chart, Some(aux), opts.seed, Some(degree))?;
                let sol = solve_spec(&sys, &opts.solve)?;
                return match best_real(&rotated, &sol, opts.imag_tol) {
                    Some(best) => Ok(finish(best, &q, &rotated, sol, degree, true, attempts, opts.imag_tol)),
                    None => Err(AdapterError::NoAcceptedSolutions),
                };
            }
            Err(e) if e.is_rank_failure() => {
                attempts.push((degree, e.to_string()));
                degree[growable[step % growable.len()]] += 1;
                step += 1;
            }
            Err(SolveError::Assembly(
                e @ (AssemblyError::BudgetExceeded { .. } | AssemblyError::MatrixTooLarge { .. }),
            )) => {
                attempts.push((degree, e.to_string()));
                return Err(AdapterError::EscalationExhausted { attempts });
            }
            Err(e) => return Err(e.into()),
        }
    }
}

struct Best {
    value: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
}

fn real_parts(point: &[Complex64], imag_tol: f64) -> Option<Vec<f64>> {
    point.iter().all(|c| c.im.abs() <= imag_tol * c.norm().max(1.0)).then(|| point.iter().map(|c| c.re).collect())
}

/// Scores each real accepted candidate by `|ℓ|` on the unit spheres.
fn best_real(t: &Tensor3, sol: &Solution, imag_tol: f64) -> Option<Best> {
    let [n1, n2, _] = t.dims();
    sol.accepted
        .iter()
        .filter_map(|c| real_parts(&c.point, imag_tol))
        .map(|p| {
            let x: Vec<f64> = std::iter::once(1.0).chain(p[..n1 - 1].iter().copied()).collect();
            let y: Vec<f64> = std::iter::once(1.0).chain(p[n1 - 1..n1 + n2 - 2].iter().copied()).collect();
            let z: Vec<f64> = std::iter::once(1.0).chain(p[n1 + n2 - 2..].iter().copied()).collect();
            let (x, y, z) = (unit(&x), unit(&y), unit(&z));
            Best { value: t.form(&x, &y, &z).abs(), x, y, z }
        })
        .max_by(|a, b| a.value.total_cmp(&b.value))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    best: Best,
    q: &[Vec<Vec<f64>>],
    rotated: &Tensor3,
    sol: Solution,
    degree: [i64; 3],
    fallback_aux: bool,
    attempts: Vec<([i64; 3], String)>,
    imag_tol: f64,
) -> TrilinearMax {
    let sign = rotated.form(&best.x, &best.y, &best.z).signum();
    let x: Vec<f64> = mat_vec(&q[0], &best.x).iter().map(|v| v * sign).collect();
    let real = sol.accepted.iter().filter(|c| real_parts(&c.point, imag_tol).is_some()).count();
    TrilinearMax {
        value: best.value,
        x,
        y: mat_vec(&q[1], &best.y),
        z: mat_vec(&q[2], &best.z),
        multidegree: degree,
        critical_points: sol.accepted.len(),
        real_critical_points: real,
        fallback_aux,
        attempts,
        solution: Some(sol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1() -> Tensor3 {
        Tensor3::from_sparse(
            [2, 2, 2],
            &[
                (0, 0, 0, 4.0),
                (1, 0, 0, 1.0),
                (0, 1, 0, -5.0),
                (1, 1, 0, -5.0),
                (0, 0, 1, 2.0),
                (1, 0, 1, -7.0),
                (0, 1, 1, -9.0),
                (1, 1, 1, -6.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn equation_count() {
        for dims in [[2, 2, 2], [3, 2, 2], [3, 3, 2]] {
            let t = Tensor3::new(dims, (0..dims.iter().product::<usize>()).map(|v| (v % 7) as f64 - 3.0).collect())
                .unwrap();
            let c2 = |n: usize| n * (n - 1) / 2;
            let sys = lagrange_system(&t).unwrap();
            assert_eq!(sys.equations().len(), c2(dims[0]) + c2(dims[1]) + c2(dims[2]) + 3);
        }
    }

    #[test]
    fn zero_tensor_rejected() {
        assert_eq!(lagrange_system(&Tensor3::zeros([2, 2, 2])).unwrap_err(), AdapterError::ZeroTensor);
        assert_eq!(trilinear_max(&Tensor3::zeros([2, 2, 2]), 0).unwrap_err(), AdapterError::ZeroTensor);
    }

    #[test]
    fn orthogonal_matrices() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let q = random_orthogonal(4, &mut rng);
        for i in 0..4 {
            for j in 0..4 {
                let d: f64 = (0..4).map(|k| q[k][i] * q[k][j]).sum();
                assert!((d - (i == j) as u8 as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn small_golden_tensor() {
        let r = trilinear_max(&t1(), 0).unwrap();
        assert!((r.value - 12.87128226).abs() < 1e-6, "{}", r.value);
        assert!((t1().form(&r.x, &r.y, &r.z) - r.value).abs() < 1e-8);
    }

    #[test]
    fn maximizer_satisfies_literal_system() {
        let t = t1();
        let r = trilinear_max(&t, 0).unwrap();
        let sys = lagrange_system(&t).unwrap();
        let pt: Vec<Complex64> = r.x.iter().chain(&r.y).chain(&r.z).map(|&v| Complex64::new(v, 0.0)).collect();
        for f in sys.equations() {
            assert!(f.evaluate(&pt).unwrap().norm() < 1e-8);
        }
        assert!((sys.aux().evaluate(&pt).unwrap().re - r.value).abs() < 1e-8);
    }

    #[test]
    fn one_by_one_by_one() {
        let t = Tensor3::new([1, 1, 1], vec![-2.5]).unwrap();
        let r = trilinear_max(&t, 0).unwrap();
        assert_eq!(r.value, 2.5);
        assert!((t.form(&r.x, &r.y, &r.z) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn matrix_case_is_spectral_norm() {
        // 2×2×1: the first singular value of the 2×2 slice
        let t = Tensor3::new([2, 2, 1], vec![3.0, 0.0, 4.0, 5.0]).unwrap();
        let r = trilinear_max(&t, 1).unwrap();
        // singular values of [[3,0],[4,5]] are 3√5 and √5
        assert!((r.value - 3.0 * 5f64.sqrt()).abs() < 1e-8, "{}", r.value);
    }
}
