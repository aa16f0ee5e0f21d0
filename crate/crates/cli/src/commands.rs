use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use serde::Serialize;
use sparse_eigsolve::adapters::{dense_system, trilinear_max_with, AdapterError, TrilinearMaxOptions};
use sparse_eigsolve::extractor::DEFAULT_EPSILON;
use sparse_eigsolve::io::{
    parse_supports, parse_tensor, rational_json, Emit, SolveReport, SolveRequest, Term, TrilinearReport,
};
use sparse_eigsolve::lattice::{self, convex_hull};
use sparse_eigsolve::solver::{solve_spec, solve_system, SolveError, SolveOptions};

use crate::format;
use crate::{BenchArgs, EmitArg, Format, MixedVolumeArgs, Output, PolysolveArgs, SolveArgs, TrilinearArgs, Tuning};

pub const DEFAULT_BENCH_ROWS: &str = "1,5,7;1,5,9;1,5,11;1,7,9;1,7,11;1,9,11;1,11,11";

const RANK_HINT: &str = "rerun with another --seed or a larger --budget; a deficit that persists suggests a positive-dimensional solution set";

#[derive(Debug)]
pub enum Failure {
    Input(String),
    NoSolutions,
    Rank(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::NoSolutions => 2,
            Failure::Rank(_) => 3,
        }
    }

    pub fn message(&self) -> Option<String> {
        match self {
            Failure::Input(m) => Some(m.clone()),
            Failure::NoSolutions => Some("no candidate passed the identification test".into()),
            Failure::Rank(m) => Some(format!("{m}\nhint: {RANK_HINT}")),
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn from_solve(e: SolveError) -> Failure {
    if e.is_rank_failure() {
        Failure::Rank(e.to_string())
    } else {
        Failure::Input(e.to_string())
    }
}

fn from_adapter(e: AdapterError) -> Failure {
    match e {
        AdapterError::NoAcceptedSolutions => Failure::NoSolutions,
        AdapterError::EscalationExhausted { .. } => Failure::Rank(e.to_string()),
        AdapterError::Solve(s) => from_solve(s),
        other => Failure::Input(other.to_string()),
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(input)?;
            Ok(s)
        }
    }
}

fn write_output(out: &Output, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(input),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn options(t: &Tuning, epsilon: f64) -> SolveOptions {
    let mut opts = SolveOptions { epsilon, ..SolveOptions::default() };
    if let Some(b) = t.budget {
        opts.budget = b;
    }
    opts
}

fn emit_of(e: EmitArg) -> Emit {
    match e {
        EmitArg::Solutions => Emit::Solutions,
        EmitArg::Full => Emit::Full,
    }
}

fn finish_report(report: &SolveReport, out: &Output) -> Result<(), Failure> {
    let text = match out.format {
        Format::Json => json(report),
        Format::Table => format::solve_table(report),
    };
    write_output(out, &text)?;
    if report.num_accepted == 0 {
        Err(Failure::NoSolutions)
    } else {
        Ok(())
    }
}

pub fn solve(a: &SolveArgs) -> Result<(), Failure> {
    let text = read_input(a.input.as_ref())?;
    let mut req = SolveRequest::from_json(&text).map_err(input)?;
    if let Some(s) = a.seed {
        req.seed = s;
    }
    if let Some(e) = a.tuning.epsilon {
        req.epsilon = Some(e);
    }
    if let Some(f0) = &a.f0 {
        let terms: Vec<Term> = serde_json::from_str(f0).map_err(|e| Failure::Input(format!("--f0: {e}")))?;
        req.f0 = Some(terms);
    }
    if let Some(e) = a.emit {
        req.emit = emit_of(e);
    }
    req.validate().map_err(input)?;
    let opts = options(&a.tuning, req.epsilon());
    let eqs = req.equations().map_err(input)?;
    let aux = req.aux().map_err(input)?;
    let (spec, sol) = solve_system(eqs, aux, req.seed, &opts).map_err(from_solve)?;
    finish_report(&SolveReport::new(&spec, &sol, req.seed, req.emit), &a.out)
}

pub fn polysolve(a: &PolysolveArgs) -> Result<(), Failure> {
    if a.degrees.len() < 2 {
        return Err(Failure::Input("--degrees needs the degree of f0 followed by at least one more".into()));
    }
    let spec = dense_system(a.degrees[0], &a.degrees[1..], a.n, a.seed).map_err(from_adapter)?;
    let opts = options(&a.tuning, a.tuning.epsilon.unwrap_or(DEFAULT_EPSILON));
    let sol = solve_spec(&spec, &opts).map_err(from_solve)?;
    finish_report(&SolveReport::new(&spec, &sol, a.seed, emit_of(a.emit)), &a.out)
}

pub fn trilinear_max(a: &TrilinearArgs) -> Result<(), Failure> {
    let text = match &a.tensor {
        Some(t) => t.clone(),
        None => read_input(a.input.as_ref())?,
    };
    let t = parse_tensor(&text).map_err(input)?;
    let mut opts = TrilinearMaxOptions { seed: a.seed, ..TrilinearMaxOptions::default() };
    if let Some(e) = a.tuning.epsilon {
        opts.solve.epsilon = e;
    }
    if let Some(b) = a.tuning.budget {
        opts.solve.budget = b;
    }
    let r = trilinear_max_with(&t, &opts).map_err(from_adapter)?;
    let report = TrilinearReport::new(&r, a.seed);
    let text = match a.out.format {
        Format::Json => json(&report),
        Format::Table => format::trilinear_table(&report),
    };
    write_output(&a.out, &text)
}

pub fn mixed_volume(a: &MixedVolumeArgs) -> Result<(), Failure> {
    let supports = parse_supports(&read_input(a.input.as_ref())?).map_err(input)?;
    let polys = supports.iter().map(|s| convex_hull(s)).collect::<Result<Vec<_>, _>>().map_err(input)?;
    let mv = lattice::mixed_volume(&polys).map_err(input)?;
    let text = match a.out.format {
        Format::Json => json(&serde_json::json!({ "mixed_volume": rational_json(&mv) })),
        Format::Table => format!("{mv}\n"),
    };
    write_output(&a.out, &text)
}

#[derive(Debug, Serialize)]
pub struct BenchRow {
    pub degrees: Vec<i64>,
    /// Seconds for bases, assembly, reduction and eigenvectors.
    pub steps_1_to_4: f64,
    pub total: f64,
    pub p: usize,
    pub q: usize,
    pub rank22: usize,
    pub accepted: usize,
}

pub fn parse_rows(s: &str) -> Result<Vec<Vec<i64>>, Failure> {
    s.split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| {
            let row = r
                .trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .map(|v| v.trim().parse::<i64>().map_err(|e| Failure::Input(format!("row \"{r}\": {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() < 2 {
                return Err(Failure::Input(format!("row \"{r}\" needs at least two degrees")));
            }
            Ok(row)
        })
        .collect()
}

pub fn bench(a: &BenchArgs) -> Result<(), Failure> {
    let rows = parse_rows(&a.rows)?;
    if rows.is_empty() {
        return Ok(());
    }
    let opts = options(&a.tuning, a.tuning.epsilon.unwrap_or(DEFAULT_EPSILON));
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let spec = dense_system(row[0], &row[1..], a.n, a.seed).map_err(from_adapter)?;
        let sol = solve_spec(&spec, &opts).map_err(from_solve)?;
        out.push(BenchRow {
            steps_1_to_4: sol.timings.steps_1_to_4().as_secs_f64(),
            total: sol.timings.total().as_secs_f64(),
            p: sol.p,
            q: sol.q,
            rank22: sol.rank22,
            accepted: sol.accepted.len(),
            degrees: row,
        });
    }
    if let (Some(first), Some(last)) = (out.first(), out.last()) {
        if out.len() > 1 && first.steps_1_to_4 > last.steps_1_to_4 {
            eprintln!(
                "warning: first row took {:.3} s, longer than the last row's {:.3} s",
                first.steps_1_to_4, last.steps_1_to_4
            );
        }
    }
    let text = match a.out.format {
        Format::Json => json(&out),
        Format::Table => format::bench_table(&out),
    };
    write_output(&a.out, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_parse() {
        assert_eq!(parse_rows("1,5,7; (1, 5, 9)").unwrap(), vec![vec![1, 5, 7], vec![1, 5, 9]]);
        assert!(parse_rows("").unwrap().is_empty());
        assert!(parse_rows("1").is_err());
        assert!(parse_rows("1,x").is_err());
        assert_eq!(parse_rows(DEFAULT_BENCH_ROWS).unwrap().len(), 7);
    }
}
