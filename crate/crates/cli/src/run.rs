use gaudin_core::bethe::{
    classify_cell, multi_start_report, residual, solve_from_starts, BetheProblem, BetheSolution,
    MultiStartOptions, MultiStartReport, NewtonOptions, Site, DEFAULT_CAP,
};
use gaudin_core::gaudin::{gaudin_check, DEFAULT_CUTOFF};
use gaudin_core::miura::{
    connection_from_roots, connection_from_solution, miura_scalar_oper, regularity_report,
    OperKind, ScalarOper,
};
use gaudin_core::operforms::{leading_data, rs_residue, CanonicalOper};
use gaudin_core::repro::{
    default_c_samples, degree_drop_value, explore_population, fertile_antiderivative, reproduce,
    riccati_gauge, tuple_from_roots, tuple_residual, PolyTuple, PopulationOptions,
};
use gaudin_core::rootdata::{load_cartan, CartanLabel, Coweight};
use gaudin_core::{Error, Execution};
use num_complex::Complex64;

use crate::doc::*;

/// Failure of a command. Input errors exit with status 2, numeric
/// infrastructure failures with status 1.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidCartan(_)
            | Error::UnknownCartanType(_)
            | Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidProblem(_)
            | Error::UnsupportedType(_)
            | Error::Collision { .. } => CliError::Input(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Settings given on the command line; unset values fall back to the
/// document's `options`, then to the defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub coll_tol: Option<f64>,
    pub rat_tol: Option<f64>,
    pub erase_tol: Option<f64>,
    pub starts: Option<usize>,
    pub seed: Option<u64>,
    pub depth: Option<usize>,
    pub cap: Option<usize>,
    pub max_dim: Option<usize>,
    pub cutoff: Option<usize>,
}

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_RAT_TOL: f64 = 1e-9;
pub const DEFAULT_ERASE_TOL: f64 = 1e-8;
pub const DEFAULT_STARTS: usize = 64;
pub const DEFAULT_DEPTH: usize = 1;
pub const DEFAULT_MAX_DIM: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub tol: f64,
    /// `None` uses the problem's default collision guard.
    pub coll_tol: Option<f64>,
    pub rat_tol: f64,
    pub erase_tol: f64,
    pub starts: usize,
    pub seed: u64,
    pub depth: usize,
    pub cap: usize,
    pub max_dim: usize,
    pub cutoff: usize,
}

impl Settings {
    pub fn resolve(flags: &Overrides, doc: Option<&OptionsDoc>) -> Self {
        let d = doc.cloned().unwrap_or_default();
        Self {
            tol: flags.tol.or(d.tol).unwrap_or(DEFAULT_TOL),
            coll_tol: flags.coll_tol.or(d.coll_tol),
            rat_tol: flags.rat_tol.or(d.rat_tol).unwrap_or(DEFAULT_RAT_TOL),
            erase_tol: flags.erase_tol.or(d.erase_tol).unwrap_or(DEFAULT_ERASE_TOL),
            starts: flags.starts.or(d.starts).unwrap_or(DEFAULT_STARTS),
            seed: flags.seed.or(d.seed).unwrap_or(0),
            depth: flags.depth.or(d.depth).unwrap_or(DEFAULT_DEPTH),
            cap: flags.cap.or(d.cap).unwrap_or(DEFAULT_CAP),
            max_dim: flags.max_dim.or(d.max_dim).unwrap_or(DEFAULT_MAX_DIM),
            cutoff: flags.cutoff.or(d.cutoff).unwrap_or(DEFAULT_CUTOFF),
        }
    }

    fn guard(&self, problem: &BetheProblem) -> f64 {
        self.coll_tol
            .unwrap_or_else(|| problem.default_collision_guard())
    }

    fn multi_start(&self) -> MultiStartOptions {
        MultiStartOptions {
            num_starts: self.starts,
            seed: self.seed,
            newton: NewtonOptions {
                tol: self.tol,
                collision_guard: self.coll_tol,
                ..Default::default()
            },
            ..Default::default()
        }
    }
}

/// Either a problem or a previously emitted solutions document.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Problem(ProblemDocument),
    Solutions(SolutionsDocument),
}

impl Input {
    pub fn problem(&self) -> &ProblemDocument {
        match self {
            Input::Problem(p) => p,
            Input::Solutions(s) => &s.problem,
        }
    }
}

fn parse_as<T: serde::de::DeserializeOwned>(text: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Input(format!("at `{path}`: {}", e.into_inner()))
    })
}

/// Parses a problem document, or a solutions document when the top level has
/// a `solutions` field.
pub fn parse_input(text: &str) -> CliResult<Input> {
    let is_solutions = serde_json::from_str::<serde_json::Value>(text)
        .map(|v| v.get("solutions").is_some())
        .unwrap_or(false);
    let input = if is_solutions {
        Input::Solutions(parse_as(text)?)
    } else {
        Input::Problem(parse_as(text)?)
    };
    if let Some(s) = &input.problem().schema {
        if s != SCHEMA {
            return Err(CliError::Input(format!(
                "unsupported schema `{s}`, expected `{SCHEMA}`"
            )));
        }
    }
    Ok(input)
}

pub fn build_problem(doc: &ProblemDocument) -> CliResult<BetheProblem> {
    let cartan = match &doc.cartan {
        CartanSpec::Label(s) => load_cartan(CartanLabel::Named(s))?,
        CartanSpec::Matrix(rows) => load_cartan(CartanLabel::Explicit(rows))?,
    };
    let sites = doc
        .sites
        .iter()
        .map(|s| Site::new(from_cx(s.z), Coweight::from_integers(&s.coweight)))
        .collect();
    let colors = doc
        .colors
        .iter()
        .map(|&c| {
            c.checked_sub(1)
                .ok_or_else(|| CliError::Input("colors are one-based; found 0".into()))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(BetheProblem::new(cartan, sites, colors)?)
}

fn given_roots(doc: &ProblemDocument, problem: &BetheProblem) -> CliResult<Vec<Complex64>> {
    let roots: Vec<Complex64> = doc.roots.iter().flatten().copied().map(from_cx).collect();
    if roots.len() != problem.num_roots() {
        return Err(CliError::Input(format!(
            "document has {} roots for {} colors",
            roots.len(),
            problem.num_roots()
        )));
    }
    Ok(roots)
}

fn mu_integers(mu: &Coweight) -> Vec<i64> {
    mu.to_integers().unwrap_or_default()
}

fn regularity_docs(oper: &ScalarOper, points: &[Complex64], tol: f64) -> Vec<RegularityDoc> {
    regularity_report(oper, points, tol)
        .into_iter()
        .map(|r| RegularityDoc {
            point: cx(r.point),
            erased: r.erased,
            max_tail: r.max_tail(),
            tails: r
                .tails
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|&(order, c)| TailTerm {
                            order,
                            coeff: cx(c),
                        })
                        .collect()
                })
                .collect(),
        })
        .collect()
}

fn solution_doc(problem: &BetheProblem, sol: &BetheSolution, settings: &Settings) -> SolutionDoc {
    let (label, label_error) = match classify_cell(problem, sol, settings.cap) {
        Ok(l) => (Some(LabelDoc::from(&l)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (regularity, oper_error) =
        match miura_scalar_oper(&connection_from_solution(problem, sol), 1e-8) {
            Ok(oper) => (
                Some(regularity_docs(&oper, &sol.roots, settings.erase_tol)),
                None,
            ),
            Err(e) => (None, Some(e.to_string())),
        };
    SolutionDoc {
        roots: cxs(&sol.roots),
        residual: sol.residual,
        jacobian_rank: sol.jacobian_rank,
        isolated: sol.is_isolated(),
        iterations: sol.iterations,
        mu_infinity: mu_integers(&problem.residue_at_infinity()),
        label,
        label_error,
        regularity,
        oper_error,
    }
}

fn echo(doc: &ProblemDocument) -> ProblemDocument {
    ProblemDocument {
        schema: None,
        ..doc.clone()
    }
}

pub fn run_solve(input: &Input, settings: &Settings) -> CliResult<SolutionsDocument> {
    let doc = input.problem();
    let problem = build_problem(doc)?;
    let opts = settings.multi_start();
    let MultiStartReport {
        solutions,
        failures,
    } = match input {
        Input::Problem(_) => multi_start_report(&problem, &opts),
        Input::Solutions(s) => {
            let starts: Vec<Vec<Complex64>> = s
                .solutions
                .iter()
                .map(|sol| sol.roots.iter().copied().map(from_cx).collect())
                .collect();
            if problem.num_roots() == 0 {
                multi_start_report(&problem, &opts)
            } else {
                solve_from_starts(&problem, &starts, &opts)
            }
        }
    };
    Ok(SolutionsDocument {
        schema: SCHEMA.into(),
        problem: echo(doc),
        solutions: solutions
            .iter()
            .map(|s| solution_doc(&problem, s, settings))
            .collect(),
        start_failures: failures
            .into_iter()
            .map(|(start, e)| StartFailure {
                start,
                error: e.to_string(),
            })
            .collect(),
    })
}

pub fn run_verify(doc: &ProblemDocument, settings: &Settings) -> CliResult<VerifyDocument> {
    let problem = build_problem(doc)?;
    let roots = given_roots(doc, &problem)?;
    let guard = settings.guard(&problem);
    let eq = residual(&problem, &roots, guard)?;
    let sol = BetheSolution::evaluate(&problem, roots, guard)?;
    Ok(VerifyDocument {
        schema: SCHEMA.into(),
        problem: echo(doc),
        equation_residuals: cxs(&eq),
        solution: solution_doc(&problem, &sol, settings),
    })
}

pub fn run_miura(doc: &ProblemDocument, settings: &Settings) -> CliResult<MiuraDocument> {
    let problem = build_problem(doc)?;
    let roots = given_roots(doc, &problem)?;
    let oper = miura_scalar_oper(&connection_from_roots(&problem, &roots), 1e-8)?;
    let canon = CanonicalOper::from(&oper);
    let sites = problem
        .sites()
        .iter()
        .map(|s| {
            let leading = leading_data(&canon, s.z);
            SiteOperDoc {
                point: cx(s.z),
                rs_residue: cxs(&rs_residue(&leading)),
                leading: cxs(&leading),
            }
        })
        .collect();
    Ok(MiuraDocument {
        schema: SCHEMA.into(),
        problem: echo(doc),
        roots: cxs(&roots),
        kind: match oper.kind {
            OperKind::A { n } => format!("sl_{n}"),
            OperKind::B { n } => format!("so_{}", 2 * n + 1),
            OperKind::C { n } => format!("sp_{}", 2 * n),
        },
        order: oper.order(),
        v: oper.v.iter().map(RatFunDoc::from).collect(),
        sites,
        regularity: regularity_docs(&oper, &roots, settings.erase_tol),
    })
}

fn polys_doc(t: &PolyTuple, tol: f64) -> Vec<PolyDoc> {
    t.polys.iter().map(|p| PolyDoc::new(p, tol)).collect()
}

pub fn run_reproduce(doc: &ProblemDocument, settings: &Settings) -> CliResult<ReproduceDocument> {
    let problem = build_problem(doc)?;
    let roots = given_roots(doc, &problem)?;
    let direction = doc
        .direction
        .ok_or_else(|| CliError::Input("reproduce needs `direction` (one-based)".into()))?;
    let i = direction
        .checked_sub(1)
        .filter(|&i| i < problem.rank())
        .ok_or_else(|| {
            CliError::Input(format!(
                "direction {direction} out of range 1..={}",
                problem.rank()
            ))
        })?;
    let c_cx = doc.c.unwrap_or([0.0, 0.0]);
    let c = from_cx(c_cx);
    let tuple = tuple_from_roots(&problem, &roots);
    let tol = settings.rat_tol;
    let mut out = ReproduceDocument {
        schema: SCHEMA.into(),
        problem: echo(doc),
        direction,
        c: c_cx,
        status: "ok".into(),
        error: None,
        residues: Vec::new(),
        degree_drop_c: None,
        tuple: None,
        colors: None,
        roots: None,
        pairing_before: None,
        pairing_after: None,
        degree_changed: None,
        residual: None,
        riccati_residual: None,
    };
    let f = match fertile_antiderivative(&problem, &tuple, i, tol) {
        Ok(f) => f,
        Err(Error::Infertile { residues }) => {
            out.status = "infertile".into();
            out.residues = residues
                .into_iter()
                .map(|(at, r)| ResidueDoc {
                    at: cx(at),
                    residue: cx(r),
                })
                .collect();
            return Ok(out);
        }
        Err(e) => return Err(e.into()),
    };
    out.degree_drop_c = degree_drop_value(&f).map(cx);
    match reproduce(&problem, &tuple, i, c, tol) {
        Ok(rep) => {
            let (p2, new_roots) = rep.tuple.to_roots(&problem, tol)?;
            out.colors = Some(p2.colors().iter().map(|c| c + 1).collect());
            out.roots = Some(cxs(&new_roots));
            out.tuple = Some(polys_doc(&rep.tuple, tol));
            out.pairing_before = Some(rep.pairing_before);
            out.pairing_after = Some(rep.pairing_after);
            out.degree_changed = Some(rep.degree_changed);
            out.residual = tuple_residual(&problem, &rep.tuple, tol);
            out.riccati_residual = riccati_gauge(&problem, &tuple, i, Some(c), tol)
                .ok()
                .map(|s| s.riccati_residual);
        }
        Err(e) => {
            out.status = "failed".into();
            out.error = Some(e.to_string());
        }
    }
    Ok(out)
}

pub fn run_population(doc: &ProblemDocument, settings: &Settings) -> CliResult<PopulationDocument> {
    let problem = build_problem(doc)?;
    let roots = given_roots(doc, &problem)?;
    let seed = tuple_from_roots(&problem, &roots);
    let mut c_samples = default_c_samples();
    for z in doc.c_samples.iter().flatten() {
        c_samples.push(from_cx(*z));
    }
    let opts = PopulationOptions {
        depth: settings.depth,
        c_samples,
        tol: settings.rat_tol,
        ..Default::default()
    };
    let pop = explore_population(&problem, &seed, &opts);

    let classes = pop.degree_classes();
    let class_of: Vec<usize> = pop
        .nodes
        .iter()
        .map(|n| {
            classes
                .iter()
                .position(|d| *d == n.degrees)
                .expect("class exists")
        })
        .collect();
    let nodes = classes
        .iter()
        .enumerate()
        .map(|(id, degrees)| {
            let members: Vec<_> = pop.nodes.iter().filter(|n| &n.degrees == degrees).collect();
            let rep = members
                .iter()
                .find(|n| !n.degenerate)
                .unwrap_or(&members[0]);
            ClassDoc {
                id,
                degrees: degrees.clone(),
                mu_infinity: mu_integers(&rep.mu_infinity),
                label: rep.label.as_ref().map(LabelDoc::from),
                members: members.len(),
                representative_roots: polys_doc(&rep.tuple, settings.rat_tol)
                    .into_iter()
                    .map(|p| p.roots)
                    .collect(),
            }
        })
        .collect();
    let mut edges: Vec<ClassEdgeDoc> = Vec::new();
    for e in &pop.edges {
        let (from, to) = (class_of[e.from], class_of[e.to]);
        match edges
            .iter_mut()
            .find(|x| x.from == from && x.to == to && x.direction == e.direction + 1)
        {
            Some(x) => x.count += 1,
            None => edges.push(ClassEdgeDoc {
                from,
                to,
                direction: e.direction + 1,
                c: cx(e.c),
                count: 1,
            }),
        }
    }
    Ok(PopulationDocument {
        schema: SCHEMA.into(),
        problem: echo(doc),
        depth: settings.depth,
        nodes,
        edges,
        tuples: pop
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| TupleDoc {
                id,
                class: class_of[id],
                depth: n.depth,
                degenerate: n.degenerate,
                polys: polys_doc(&n.tuple, settings.rat_tol),
            })
            .collect(),
        tuple_edges: pop
            .edges
            .iter()
            .map(|e| TupleEdgeDoc {
                from: e.from,
                to: e.to,
                direction: e.direction + 1,
                c: cx(e.c),
                pairing_before: e.pairing_before,
                pairing_after: e.pairing_after,
                degree_changed: e.degree_changed,
            })
            .collect(),
        skipped: pop
            .skipped
            .into_iter()
            .map(|s| SkipDoc {
                tuple: s.node,
                direction: s.direction + 1,
                reason: s.reason,
            })
            .collect(),
    })
}

pub fn run_gaudin_check(doc: &ProblemDocument, settings: &Settings) -> CliResult<ReportDocument> {
    let problem = build_problem(doc)?;
    let guard = settings.guard(&problem);
    let solutions = if doc.roots.is_some() || problem.num_roots() == 0 {
        vec![BetheSolution::evaluate(
            &problem,
            given_roots(doc, &problem)?,
            guard,
        )?]
    } else {
        multi_start_report(&problem, &settings.multi_start()).solutions
    };
    let mut reports = Vec::new();
    for sol in &solutions {
        let mut r = GaudinDoc {
            roots: cxs(&sol.roots),
            bethe_residual: sol.residual,
            error: None,
            dimension: None,
            vector_norm: None,
            eigenvalues: Vec::new(),
            residuals: Vec::new(),
            casimirs: Vec::new(),
            max_commutator: None,
            sum_norm: None,
            highest_weight_defect: None,
            kappa: None,
            eigenvalue_function: None,
            v1: None,
            oper_max_deviation: None,
        };
        match gaudin_check(
            &problem,
            sol,
            settings.cutoff,
            settings.max_dim,
            Execution::Parallel,
        ) {
            Ok(g) => {
                r.dimension = Some(g.dimension);
                r.vector_norm = Some(g.vector_norm);
                r.eigenvalues = cxs(&g.eigenvalues);
                r.residuals = g.residuals;
                r.casimirs = g.casimirs;
                r.max_commutator = Some(g.max_commutator);
                r.sum_norm = Some(g.sum_norm);
                r.highest_weight_defect = Some(g.highest_weight_defect);
                if let Some(m) = g.oper {
                    r.kappa = Some(m.kappa);
                    r.eigenvalue_function = Some(RatFunDoc::from(&m.psi));
                    r.v1 = Some(RatFunDoc::from(&m.v1));
                    r.oper_max_deviation = Some(m.max_deviation);
                }
            }
            Err(
                e @ (Error::CutoffExceeded { .. }
                | Error::UnsupportedType(_)
                | Error::InvalidProblem(_)),
            ) => {
                return Err(match e {
                    Error::CutoffExceeded { .. } => CliError::Numeric(e.to_string()),
                    other => other.into(),
                })
            }
            Err(e) => r.error = Some(e.to_string()),
        }
        reports.push(r);
    }
    Ok(ReportDocument {
        schema: SCHEMA.into(),
        problem: echo(doc),
        beta: problem.color_counts(),
        reports,
    })
}
