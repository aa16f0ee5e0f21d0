use std::fmt::Write;

use sparse_eigsolve::io::{SolveReport, TrilinearReport};

use crate::commands::BenchRow;

fn complex(z: [f64; 2]) -> String {
    format!("{:.12}{:+.12}i", z[0], z[1])
}

pub fn solve_table(r: &SolveReport) -> String {
    let mut s = String::new();
    writeln!(s, "# {} accepted, {} variables, seed {}", r.num_accepted, r.dim, r.seed).unwrap();
    if let Some(d) = &r.diagnostics {
        writeln!(
            s,
            "# p {} q {} p_i {:?} rank(M22) {} cond {:.3e} |M|_1 {:.3e} threshold {:.3e}",
            d.p, d.q, d.p_i, d.rank22, d.condition22, d.one_norm, d.threshold
        )
        .unwrap();
        writeln!(
            s,
            "# steps 1-4 {:.6} s, total {:.6} s, {} rejected, {} skipped",
            d.timings.steps_1_to_4,
            d.timings.total,
            d.rejected.len(),
            d.skipped.len()
        )
        .unwrap();
    }
    for (i, c) in r.accepted.iter().enumerate() {
        let point: Vec<String> = c.point.iter().map(|z| complex(*z)).collect();
        let worst = c.equation_residuals.iter().copied().fold(c.aux_residual, f64::max);
        writeln!(s, "{i}\t{}\tf0 {}\tres {worst:.2e}", point.join("  "), complex(c.eigenvalue)).unwrap();
    }
    s
}

pub fn trilinear_table(r: &TrilinearReport) -> String {
    let vec = |v: &[f64]| v.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>().join(" ");
    format!(
        "max {}\nx {}\ny {}\nz {}\nmultidegree ({},{},{}) critical points {} ({} real)\n",
        r.value,
        vec(&r.x),
        vec(&r.y),
        vec(&r.z),
        r.multidegree[0],
        r.multidegree[1],
        r.multidegree[2],
        r.critical_points,
        r.real_critical_points
    )
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut s = String::from("degrees\tsteps 1-4 (s)\ttotal (s)\tp\tq\taccepted\n");
    for r in rows {
        let d: Vec<String> = r.degrees.iter().map(i64::to_string).collect();
        writeln!(s, "({})\t{:.4}\t{:.4}\t{}\t{}\t{}", d.join(","), r.steps_1_to_4, r.total, r.p, r.q, r.accepted)
            .unwrap();
    }
    s
}
