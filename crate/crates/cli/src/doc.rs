//! JSON documents read and written by the command-line tool.
//!
//! Complex numbers are `[re, im]` pairs. Colors, simple-root directions and
//! Weyl letters are one-based.

use gaudin_core::bethe::CellLabel;
use gaudin_core::ratfun::{Poly, RatFun};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "gaudin-opers/1";

pub type Cx = [f64; 2];

pub fn cx(z: Complex64) -> Cx {
    [z.re, z.im]
}

pub fn from_cx(z: Cx) -> Complex64 {
    Complex64::new(z[0], z[1])
}

pub fn cxs(zs: &[Complex64]) -> Vec<Cx> {
    zs.iter().copied().map(cx).collect()
}

fn schema() -> String {
    SCHEMA.to_string()
}

/// A type label such as `"B3"` or explicit matrix rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CartanSpec {
    Label(String),
    Matrix(Vec<Vec<i64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteDoc {
    pub z: Cx,
    pub coweight: Vec<i64>,
}

/// Per-document defaults; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coll_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rat_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub erase_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub cartan: CartanSpec,
    pub sites: Vec<SiteDoc>,
    #[serde(default)]
    pub colors: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsDoc>,
    /// Roots for verify, miura, reproduce, population (seed) and gaudin-check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<Cx>>,
    /// Simple-root direction for reproduce.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<usize>,
    /// Integration constant for reproduce.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Cx>,
    /// Extra integration constants for population.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_samples: Option<Vec<Cx>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelDoc {
    pub lambda_infinity: Vec<i64>,
    pub word: Vec<usize>,
}

impl From<&CellLabel> for LabelDoc {
    fn from(l: &CellLabel) -> Self {
        Self {
            lambda_infinity: l.lambda_infinity.to_integers().unwrap_or_default(),
            word: l.word.one_based(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailTerm {
    pub order: i32,
    pub coeff: Cx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularityDoc {
    pub point: Cx,
    pub erased: bool,
    pub max_tail: f64,
    /// `tails[k]` is the principal part of `v_{k+1}` at `point`.
    pub tails: Vec<Vec<TailTerm>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDoc {
    pub roots: Vec<Cx>,
    pub residual: f64,
    pub jacobian_rank: usize,
    pub isolated: bool,
    pub iterations: usize,
    pub mu_infinity: Vec<i64>,
    pub label: Option<LabelDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_error: Option<String>,
    pub regularity: Option<Vec<RegularityDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oper_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartFailure {
    pub start: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionsDocument {
    #[serde(default = "schema")]
    pub schema: String,
    pub problem: ProblemDocument,
    pub solutions: Vec<SolutionDoc>,
    pub start_failures: Vec<StartFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyDocument {
    pub schema: String,
    pub problem: ProblemDocument,
    pub equation_residuals: Vec<Cx>,
    pub solution: SolutionDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleDoc {
    pub at: Cx,
    /// `coeffs[k]` multiplies `(t - at)^-(k+1)`.
    pub coeffs: Vec<Cx>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatFunDoc {
    pub polynomial: Vec<Cx>,
    pub poles: Vec<PoleDoc>,
}

impl From<&RatFun> for RatFunDoc {
    fn from(f: &RatFun) -> Self {
        Self {
            polynomial: cxs(f.polynomial_part().coeffs()),
            poles: f
                .pole_parts()
                .iter()
                .map(|p| PoleDoc {
                    at: cx(p.pole),
                    coeffs: cxs(&p.coeffs),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteOperDoc {
    pub point: Cx,
    /// Coefficient of `(t - point)^-(j+1)` in `v_j`.
    pub leading: Vec<Cx>,
    pub rs_residue: Vec<Cx>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MiuraDocument {
    pub schema: String,
    pub problem: ProblemDocument,
    pub roots: Vec<Cx>,
    pub kind: String,
    pub order: usize,
    pub v: Vec<RatFunDoc>,
    pub sites: Vec<SiteOperDoc>,
    pub regularity: Vec<RegularityDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDoc {
    pub coeffs: Vec<Cx>,
    pub roots: Vec<Cx>,
}

impl PolyDoc {
    pub fn new(p: &Poly, tol: f64) -> Self {
        let roots = p
            .roots(tol)
            .map(|rs| {
                rs.into_iter()
                    .flat_map(|(r, m)| std::iter::repeat_n(cx(r), m))
                    .collect()
            })
            .unwrap_or_default();
        Self {
            coeffs: cxs(p.coeffs()),
            roots,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidueDoc {
    pub at: Cx,
    pub residue: Cx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReproduceDocument {
    pub schema: String,
    pub problem: ProblemDocument,
    pub direction: usize,
    pub c: Cx,
    /// `"ok"`, `"infertile"` or `"failed"`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub residues: Vec<ResidueDoc>,
    pub degree_drop_c: Option<Cx>,
    pub tuple: Option<Vec<PolyDoc>>,
    pub colors: Option<Vec<usize>>,
    pub roots: Option<Vec<Cx>>,
    pub pairing_before: Option<i64>,
    pub pairing_after: Option<i64>,
    pub degree_changed: Option<bool>,
    pub residual: Option<f64>,
    pub riccati_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDoc {
    pub id: usize,
    pub degrees: Vec<usize>,
    pub mu_infinity: Vec<i64>,
    pub label: Option<LabelDoc>,
    pub members: usize,
    /// Roots of the first non-degenerate member, per color.
    pub representative_roots: Vec<Vec<Cx>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEdgeDoc {
    pub from: usize,
    pub to: usize,
    pub direction: usize,
    /// Integration constant of the first tuple-level edge.
    pub c: Cx,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleDoc {
    pub id: usize,
    pub class: usize,
    pub depth: usize,
    pub degenerate: bool,
    pub polys: Vec<PolyDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleEdgeDoc {
    pub from: usize,
    pub to: usize,
    pub direction: usize,
    pub c: Cx,
    pub pairing_before: i64,
    pub pairing_after: i64,
    pub degree_changed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkipDoc {
    pub tuple: usize,
    pub direction: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationDocument {
    pub schema: String,
    pub problem: ProblemDocument,
    pub depth: usize,
    pub nodes: Vec<ClassDoc>,
    pub edges: Vec<ClassEdgeDoc>,
    pub tuples: Vec<TupleDoc>,
    pub tuple_edges: Vec<TupleEdgeDoc>,
    pub skipped: Vec<SkipDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaudinDoc {
    pub roots: Vec<Cx>,
    pub bethe_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub dimension: Option<usize>,
    pub vector_norm: Option<f64>,
    pub eigenvalues: Vec<Cx>,
    pub residuals: Vec<f64>,
    pub casimirs: Vec<f64>,
    pub max_commutator: Option<f64>,
    pub sum_norm: Option<f64>,
    pub highest_weight_defect: Option<f64>,
    pub kappa: Option<f64>,
    pub eigenvalue_function: Option<RatFunDoc>,
    pub v1: Option<RatFunDoc>,
    pub oper_max_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema: String,
    pub problem: ProblemDocument,
    pub beta: Vec<usize>,
    pub reports: Vec<GaudinDoc>,
}
