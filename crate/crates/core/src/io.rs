//! JSON formats for systems, tensors, supports and reports.
//!
//! A term is `{"exponents": [..], "coeff": [re, im]}`; a bare number is also
//! read as a real coefficient. Writers always emit the canonical form.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adapters::{Tensor3, TrilinearMax};
use crate::assembly::SystemSpec;
use crate::extractor::{CandidateSolution, RejectReason, DEFAULT_EPSILON};
use crate::lattice::{LatticePoint, Polytope};
use crate::laurent::LaurentPoly;
use crate::solver::{Solution, StepTimings};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

mod complex_json {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Real(re) => Complex64::new(re, 0.0),
            Repr::Pair([re, im]) => Complex64::new(re, im),
        })
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub exponents: Vec<i64>,
    #[serde(with = "complex_json")]
    pub coeff: Complex64,
}

/// Polynomial from a term list; repeated exponents add up.
pub fn poly_from_terms(terms: &[Term]) -> Result<LaurentPoly, IoError> {
    let first = terms.first().ok_or_else(|| IoError::Invalid("empty term list".into()))?;
    let dim = first.exponents.len();
    if dim == 0 {
        return Err(IoError::Invalid("exponent vectors must be nonempty".into()));
    }
    if let Some(t) = terms.iter().find(|t| t.exponents.len() != dim) {
        return Err(IoError::Invalid(format!(
            "exponent vector {:?} has length {}, expected {dim}",
            t.exponents,
            t.exponents.len()
        )));
    }
    let f = LaurentPoly::from_terms(dim, terms.iter().map(|t| (LatticePoint::new(t.exponents.clone()), t.coeff)))
        .map_err(|e| IoError::Invalid(e.to_string()))?;
    if f.is_zero() {
        return Err(IoError::Invalid("polynomial is identically zero".into()));
    }
    Ok(f)
}

/// Terms in increasing exponent order.
pub fn poly_to_terms(f: &LaurentPoly) -> Vec<Term> {
    f.terms().map(|(v, c)| Term { exponents: v.coords().to_vec(), coeff: *c }).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Emit {
    #[default]
    Solutions,
    #[serde(alias = "full-diagnostics", alias = "full_diagnostics")]
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRequest {
    pub system: Vec<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0: Option<Vec<Term>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub emit: Emit,
}

impl SolveRequest {
    /// Parses and validates.
    pub fn from_json(s: &str) -> Result<Self, IoError> {
        let req: SolveRequest = serde_json::from_str(s)?;
        req.validate()?;
        Ok(req)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn validate(&self) -> Result<(), IoError> {
        let eqs = self.equations()?;
        if let Some(aux) = self.aux()? {
            if aux.dim() != eqs[0].dim() {
                return Err(IoError::Invalid(format!("f0 has {} variables, the system {}", aux.dim(), eqs[0].dim())));
            }
        }
        if let Some(eps) = self.epsilon {
            if !(eps.is_finite() && eps > 0.0) {
                return Err(IoError::Invalid("epsilon must be positive and finite".into()));
            }
        }
        Ok(())
    }

    pub fn equations(&self) -> Result<Vec<LaurentPoly>, IoError> {
        if self.system.is_empty() {
            return Err(IoError::Invalid("the system has no equations".into()));
        }
        let eqs = self.system.iter().map(|t| poly_from_terms(t)).collect::<Result<Vec<_>, _>>()?;
        let dim = eqs[0].dim();
        if let Some((i, f)) = eqs.iter().enumerate().find(|(_, f)| f.dim() != dim) {
            return Err(IoError::Invalid(format!("equation {} has {} variables, expected {dim}", i + 1, f.dim())));
        }
        Ok(eqs)
    }

    pub fn aux(&self) -> Result<Option<LaurentPoly>, IoError> {
        self.f0.as_deref().map(poly_from_terms).transpose()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(DEFAULT_EPSILON)
    }

    /// Same request with every polynomial rewritten in canonical term order.
    pub fn canonical(&self) -> Result<Self, IoError> {
        Ok(SolveRequest {
            system: self.equations()?.iter().map(poly_to_terms).collect(),
            f0: self.aux()?.as_ref().map(poly_to_terms),
            ..self.clone()
        })
    }
}

/// Nested numeric arrays of any depth.
#[derive(Deserialize)]
#[serde(untagged)]
enum Nested {
    Num(f64),
    List(Vec<Nested>),
}

impl Nested {
    fn flatten_into(self, out: &mut Vec<f64>) {
        match self {
            Nested::Num(v) => out.push(v),
            Nested::List(l) => l.into_iter().for_each(|n| n.flatten_into(out)),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorIn {
    dims: [usize; 3],
    entries: Nested,
}

#[derive(Serialize)]
struct TensorOut<'a> {
    dims: [usize; 3],
    entries: Vec<&'a [f64]>,
}

/// Reads `{"dims": [n1, n2, n3], "entries": ..}` with entries row-major at any
/// nesting depth.
pub fn parse_tensor(s: &str) -> Result<Tensor3, IoError> {
    let raw: TensorIn = serde_json::from_str(s)?;
    let mut flat = Vec::new();
    raw.entries.flatten_into(&mut flat);
    Tensor3::new(raw.dims, flat).map_err(|e| IoError::Invalid(e.to_string()))
}

/// Canonical tensor JSON: `n1` rows of `n2·n3` entries.
pub fn tensor_to_json(t: &Tensor3) -> String {
    let [_, n2, n3] = t.dims();
    let out = TensorOut { dims: t.dims(), entries: t.entries().chunks(n2 * n3).collect() };
    serde_json::to_string(&out).expect("serializable")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SupportsIn {
    #[serde(default)]
    supports: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default)]
    system: Option<Vec<Vec<Term>>>,
}

/// Reads `{"supports": [[[..], ..], ..]}`, or a system whose term exponents
/// are taken as the supports. Requires `n` nonempty supports in dimension `n`.
pub fn parse_supports(s: &str) -> Result<Vec<Vec<LatticePoint>>, IoError> {
    let raw: SupportsIn = serde_json::from_str(s)?;
    let sets: Vec<Vec<Vec<i64>>> = match (raw.supports, raw.system) {
        (Some(sup), None) => sup,
        (None, Some(sys)) => sys.into_iter().map(|eq| eq.into_iter().map(|t| t.exponents).collect()).collect(),
        _ => return Err(IoError::Invalid("give exactly one of \"supports\" or \"system\"".into())),
    };
    let n = sets.len();
    if n == 0 {
        return Err(IoError::Invalid("no supports".into()));
    }
    let mut out = Vec::with_capacity(n);
    for (i, set) in sets.into_iter().enumerate() {
        if set.is_empty() {
            return Err(IoError::Invalid(format!("support {} is empty", i + 1)));
        }
        if let Some(v) = set.iter().find(|v| v.len() != n) {
            return Err(IoError::Invalid(format!("{n} supports need exponent vectors of length {n}, found {v:?}")));
        }
        out.push(set.into_iter().map(LatticePoint::new).collect());
    }
    Ok(out)
}

pub fn polytope_vertices(p: &Polytope) -> Vec<Vec<i64>> {
    p.vertices().iter().map(|v| v.coords().to_vec()).collect()
}

/// Integer as a JSON number when it fits, otherwise `"num/den"`.
pub fn rational_json(r: &BigRational) -> serde_json::Value {
    if r.is_integer() {
        if let Some(v) = r.to_integer().to_i64() {
            return v.into();
        }
    }
    r.to_string().into()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateReport {
    pub point: Vec<[f64; 2]>,
    pub eigenvalue: [f64; 2],
    pub equation_residuals: Vec<f64>,
    pub aux_residual: f64,
    pub threshold: f64,
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<RejectReason>,
}

impl From<&CandidateSolution> for CandidateReport {
    fn from(c: &CandidateSolution) -> Self {
        CandidateReport {
            point: c.point.iter().copied().map(pair).collect(),
            eigenvalue: pair(c.eigenvalue),
            equation_residuals: c.equation_residuals.clone(),
            aux_residual: c.aux_residual,
            threshold: c.threshold,
            accepted: c.accepted,
            reason: c.reject_reason.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedReport {
    pub eigenvalue: [f64; 2],
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WarningReport {
    pub eigenvalue: [f64; 2],
    pub residual: f64,
    pub bound: f64,
}

/// Seconds per step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimingReport {
    pub bases: f64,
    pub assemble: f64,
    pub reduce: f64,
    pub eigen: f64,
    pub extract: f64,
    pub steps_1_to_4: f64,
    pub total: f64,
}

impl From<&StepTimings> for TimingReport {
    fn from(t: &StepTimings) -> Self {
        TimingReport {
            bases: t.bases.as_secs_f64(),
            assemble: t.assemble.as_secs_f64(),
            reduce: t.reduce.as_secs_f64(),
            eigen: t.eigen.as_secs_f64(),
            extract: t.extract.as_secs_f64(),
            steps_1_to_4: t.steps_1_to_4().as_secs_f64(),
            total: t.total().as_secs_f64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub p: usize,
    pub q: usize,
    pub p_i: Vec<usize>,
    pub rank22: usize,
    pub solve_residual: f64,
    pub condition22: f64,
    pub one_norm: f64,
    pub threshold: f64,
    pub scale_factors: Vec<i64>,
    pub polytopes: Vec<Vec<Vec<i64>>>,
    pub f0: Vec<Term>,
    pub rejected: Vec<CandidateReport>,
    pub skipped: Vec<SkippedReport>,
    pub warnings: Vec<WarningReport>,
    pub timings: TimingReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub dim: usize,
    pub seed: u64,
    pub num_accepted: usize,
    pub accepted: Vec<CandidateReport>,
    /// Present only for [`Emit::Full`]; carries the only nondeterministic fields.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
}

impl SolveReport {
    pub fn new(spec: &SystemSpec, sol: &Solution, seed: u64, emit: Emit) -> Self {
        let diagnostics = (emit == Emit::Full).then(|| Diagnostics {
            p: sol.p,
            q: sol.q,
            p_i: sol.p_i.clone(),
            rank22: sol.rank22,
            solve_residual: sol.solve_residual,
            condition22: sol.condition22,
            one_norm: sol.one_norm,
            threshold: sol.threshold,
            scale_factors: spec.scale_factors().to_vec(),
            polytopes: spec.polytopes().iter().map(polytope_vertices).collect(),
            f0: poly_to_terms(spec.aux()),
            rejected: sol.rejected.iter().map(CandidateReport::from).collect(),
            skipped: sol
                .skipped
                .iter()
                .map(|s| SkippedReport { eigenvalue: pair(s.eigenvalue), reason: s.reason.to_string() })
                .collect(),
            warnings: sol
                .warnings
                .iter()
                .map(|w| WarningReport { eigenvalue: pair(w.value), residual: w.residual, bound: w.bound })
                .collect(),
            timings: TimingReport::from(&sol.timings),
        });
        SolveReport {
            dim: spec.dim(),
            seed,
            num_accepted: sol.accepted.len(),
            accepted: sol.accepted.iter().map(CandidateReport::from).collect(),
            diagnostics,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrilinearReport {
    /// The maximum to 8 decimals.
    pub value: String,
    pub value_f64: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub multidegree: [i64; 3],
    pub critical_points: usize,
    pub real_critical_points: usize,
    pub fallback_aux: bool,
    pub seed: u64,
}

impl TrilinearReport {
    pub fn new(r: &TrilinearMax, seed: u64) -> Self {
        TrilinearReport {
            value: format!("{:.8}", r.value),
            value_f64: r.value,
            x: r.x.clone(),
            y: r.y.clone(),
            z: r.z.clone(),
            multidegree: r.multidegree,
            critical_points: r.critical_points,
            real_critical_points: r.real_critical_points,
            fallback_aux: r.fallback_aux,
            seed,
        }
    }
}
