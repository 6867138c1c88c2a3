//! The reproduction procedure on polynomial tuples, the Riccati form of the
//! same step, and breadth-first exploration of populations.

use num_complex::Complex64;

use crate::bethe::{
    classify_coweight, complex_order, residual, BetheProblem, BetheSolution, CellLabel, DEFAULT_CAP,
};
use crate::error::{Error, Result};
use crate::miura::{connection_from_roots, CartanConnection};
use crate::par::Execution;
use crate::ratfun::{Poly, RatFun};
use crate::rootdata::Coweight;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Monic polynomials `y_1..y_l`; the roots of `y_i` are the Bethe roots of
/// color `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyTuple {
    pub polys: Vec<Poly>,
}

impl PolyTuple {
    pub fn ones(rank: usize) -> Self {
        Self {
            polys: vec![Poly::one(); rank],
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|p| p.degree().unwrap_or(0)).collect()
    }

    /// `sum lambda_k - sum_i deg(y_i) alpha_check_i`.
    pub fn mu_infinity(&self, problem: &BetheProblem) -> Coweight {
        let a = problem.cartan();
        let total = problem
            .sites()
            .iter()
            .fold(Coweight::zero(a.rank()), |acc, s| &acc + &s.weight);
        self.degrees()
            .iter()
            .enumerate()
            .fold(total, |acc, (i, &d)| {
                &acc - &a.simple_coroot(i).scale(d as i64)
            })
    }

    /// Roots of every component, with multiplicities.
    pub fn roots(&self, tol: f64) -> Result<Vec<Vec<(Complex64, usize)>>> {
        self.polys.iter().map(|p| p.roots(tol)).collect()
    }

    /// The problem with colors read off the degrees, and the flat root list
    /// in color order. Multiple roots are repeated.
    pub fn to_roots(
        &self,
        problem: &BetheProblem,
        tol: f64,
    ) -> Result<(BetheProblem, Vec<Complex64>)> {
        let mut colors = Vec::new();
        let mut roots = Vec::new();
        for (i, rs) in self.roots(tol)?.into_iter().enumerate() {
            for (r, m) in rs {
                for _ in 0..m {
                    colors.push(i);
                    roots.push(r);
                }
            }
        }
        Ok((problem.with_colors(colors)?, roots))
    }
}

/// `y_i = prod_{c(j) = i} (x - w_j)`.
pub fn tuple_from_solution(problem: &BetheProblem, solution: &BetheSolution) -> PolyTuple {
    tuple_from_roots(problem, &solution.roots)
}

pub fn tuple_from_roots(problem: &BetheProblem, roots: &[Complex64]) -> PolyTuple {
    let polys = (0..problem.rank())
        .map(|i| {
            let rs: Vec<Complex64> = roots
                .iter()
                .zip(problem.colors())
                .filter(|(_, &c)| c == i)
                .map(|(&w, _)| w)
                .collect();
            Poly::from_roots(&rs)
        })
        .collect();
    PolyTuple { polys }
}

fn int_power(p: &Poly, k: u32) -> Poly {
    (0..k).fold(Poly::one(), |acc, _| &acc * p)
}

/// `T_i prod_{j != i} y_j^{-a_ji} / y_i^2` with `T_i = prod_k (x - z_k)^{<alpha_i, lambda_k>}`.
pub fn master_integrand(
    problem: &BetheProblem,
    tuple: &PolyTuple,
    i: usize,
    tol: f64,
) -> Result<RatFun> {
    let a = problem.cartan();
    if i >= a.rank() {
        return Err(Error::IndexOutOfRange {
            index: i,
            rank: a.rank(),
        });
    }
    let mut num = Poly::one();
    for s in problem.sites() {
        let p = s.weight.to_integers().expect("site weights are integral")[i];
        num = &num * &int_power(&Poly::from_roots(&[s.z]), p as u32);
    }
    for (j, y) in tuple.polys.iter().enumerate() {
        let aji = a.get(j, i);
        if j != i && aji < 0 {
            num = &num * &int_power(y, (-aji) as u32);
        }
    }
    let y = &tuple.polys[i];
    let roots: Vec<(Complex64, usize)> =
        y.roots(tol)?.into_iter().map(|(r, m)| (r, 2 * m)).collect();
    RatFun::from_factored(&num, y.leading() * y.leading(), &roots, tol)
}

/// Result of one reproduction step.
#[derive(Debug, Clone, PartialEq)]
pub struct Reproduction {
    pub tuple: PolyTuple,
    /// The rational antiderivative `F` of the master integrand.
    pub antiderivative: RatFun,
    /// `<alpha_i, mu_inf>` before and after.
    pub pairing_before: i64,
    pub pairing_after: i64,
    /// Whether `deg y_i` changed.
    pub degree_changed: bool,
}

/// Value of `c` at which `F + c` loses its constant leading term, i.e.
/// `-F(infinity)` when that limit is finite.
pub fn degree_drop_value(antiderivative: &RatFun) -> Option<Complex64> {
    match antiderivative.polynomial_part().degree() {
        None => Some(Complex64::new(0.0, 0.0)),
        Some(0) => Some(-antiderivative.polynomial_part().coeff(0)),
        Some(_) => None,
    }
}

/// Antiderivative of the master integrand, or the infertility error
/// carrying the nonzero residues.
pub fn fertile_antiderivative(
    problem: &BetheProblem,
    tuple: &PolyTuple,
    i: usize,
    tol: f64,
) -> Result<RatFun> {
    let g = master_integrand(problem, tuple, i, tol)?;
    let h = g.hermite_integrate(tol)?;
    if !h.is_log_free() {
        return Err(Error::Infertile {
            residues: h.residues,
        });
    }
    Ok(h.antiderivative())
}

/// Replaces `y_i` by the monic form of `y_i (F + c)`.
pub fn reproduce(
    problem: &BetheProblem,
    tuple: &PolyTuple,
    i: usize,
    c: Complex64,
    tol: f64,
) -> Result<Reproduction> {
    let f = fertile_antiderivative(problem, tuple, i, tol)?;
    reproduce_with(problem, tuple, i, &f, c)
}

fn reproduce_with(
    problem: &BetheProblem,
    tuple: &PolyTuple,
    i: usize,
    f: &RatFun,
    c: Complex64,
) -> Result<Reproduction> {
    let y = &tuple.polys[i];
    let shifted = f + &RatFun::constant(c);
    let prod = &RatFun::from_poly(y.clone()) * &shifted;
    let scale = 1.0 + prod.polynomial_part().max_abs();
    let polar = prod
        .pole_parts()
        .iter()
        .flat_map(|p| p.coeffs.iter())
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if polar > 1e-9 * scale {
        return Err(Error::NotPolynomial { magnitude: polar });
    }
    let new_y = prod.polynomial_part().trimmed(1e-13);
    if new_y.is_zero() {
        return Err(Error::NotPolynomial { magnitude: 0.0 });
    }
    let mut polys = tuple.polys.clone();
    polys[i] = new_y.monic();
    let out = PolyTuple { polys };
    let before = tuple.mu_infinity(problem).to_integers().expect("integral")[i];
    let after = out.mu_infinity(problem).to_integers().expect("integral")[i];
    Ok(Reproduction {
        degree_changed: out.degrees()[i] != tuple.degrees()[i],
        tuple: out,
        antiderivative: f.clone(),
        pairing_before: before,
        pairing_after: after,
    })
}

/// One Riccati step `u -> u + f alpha_check_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiStep {
    /// `d/dx log(y_i_new / y_i)`.
    pub f: RatFun,
    pub connection: CartanConnection,
    pub tuple: PolyTuple,
    /// Max of `|f' + f^2 + f u_i|` over sample points.
    pub riccati_residual: f64,
}

fn log_derivative(roots: &[(Complex64, usize)], sign: f64) -> RatFun {
    roots.iter().fold(RatFun::zero(), |acc, &(r, m)| {
        &acc + &RatFun::pole_term(r, 1, Complex64::new(sign * m as f64, 0.0))
    })
}

fn sample_points(problem: &BetheProblem) -> Vec<Complex64> {
    let c = problem.centroid();
    let r = 1.0
        + problem
            .sites()
            .iter()
            .map(|s| (s.z - c).norm())
            .fold(0.0, f64::max);
    (0..10)
        .map(|k| c + Complex64::from_polar(r * (1.3 + 0.11 * k as f64), 0.4 + 0.77 * k as f64))
        .collect()
}

/// Riccati gauge with integration constant `c`; `None` is the identity
/// (the limit `c -> infinity`).
pub fn riccati_gauge(
    problem: &BetheProblem,
    tuple: &PolyTuple,
    i: usize,
    c: Option<Complex64>,
    tol: f64,
) -> Result<RiccatiStep> {
    let (old_problem, old_roots) = tuple.to_roots(problem, tol)?;
    let conn = connection_from_roots(&old_problem, &old_roots);
    let Some(c) = c else {
        return Ok(RiccatiStep {
            f: RatFun::zero(),
            connection: conn,
            tuple: tuple.clone(),
            riccati_residual: 0.0,
        });
    };
    let rep = reproduce(problem, tuple, i, c, tol)?;
    let (new_problem, new_roots) = rep.tuple.to_roots(problem, tol)?;
    let guard = problem.default_collision_guard();
    for (j, &w) in new_roots.iter().enumerate() {
        for (k, s) in problem.sites().iter().enumerate() {
            let d = (w - s.z).norm();
            if d <= guard {
                return Err(Error::Collision {
                    first: format!("w{}", j + 1),
                    second: format!("z{}", k + 1),
                    distance: d,
                });
            }
        }
    }
    let old_i = tuple.polys[i].roots(tol)?;
    let new_i = rep.tuple.polys[i].roots(tol)?;
    let f = &log_derivative(&new_i, 1.0) + &log_derivative(&old_i, -1.0);
    let connection = connection_from_roots(&new_problem, &new_roots);
    let ui = conn.component(i);
    let df = f.derivative();
    let riccati_residual = sample_points(problem)
        .iter()
        .map(|&t| {
            let fv = f.eval(t);
            (df.eval(t) + fv * fv + fv * ui.eval(t)).norm()
        })
        .fold(0.0, f64::max);
    Ok(RiccatiStep {
        f,
        connection,
        tuple: rep.tuple,
        riccati_residual,
    })
}

/// Riccati gauge fixed by the value `a = f(x0)`: `c = g(x0)/a - F(x0)` with
/// `g` the master integrand. `a = 0` is the identity.
pub fn riccati_gauge_at(
    problem: &BetheProblem,
    tuple: &PolyTuple,
    i: usize,
    x0: Complex64,
    a: Complex64,
    tol: f64,
) -> Result<RiccatiStep> {
    if a.norm() == 0.0 {
        return riccati_gauge(problem, tuple, i, None, tol);
    }
    let g = master_integrand(problem, tuple, i, tol)?;
    let gx = g.eval(x0);
    if gx.norm() < tol || !gx.is_finite() {
        return Err(Error::DegenerateBasePoint(x0));
    }
    let f = fertile_antiderivative(problem, tuple, i, tol)?;
    let c = gx / a - f.eval(x0);
    riccati_gauge(problem, tuple, i, Some(c), tol)
}

/// Default integration constants sampled by the explorer.
pub fn default_c_samples() -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 0.0),
        ONE,
        -ONE,
        Complex64::new(0.0, 1.0),
        Complex64::new(0.37, 0.0),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationOptions {
    pub depth: usize,
    /// Integration constants tried in every direction (in addition to the
    /// degree-drop value).
    pub c_samples: Vec<Complex64>,
    pub tol: f64,
    /// Root multisets closer than this are the same tuple.
    pub dedup_tol: f64,
    /// Stop adding nodes beyond this count.
    pub max_nodes: usize,
    pub execution: Execution,
}

impl Default for PopulationOptions {
    fn default() -> Self {
        Self {
            depth: 1,
            c_samples: default_c_samples(),
            tol: 1e-9,
            dedup_tol: 1e-6,
            max_nodes: 500,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationNode {
    pub tuple: PolyTuple,
    pub degrees: Vec<usize>,
    pub mu_infinity: Coweight,
    /// `None` when the residue at infinity cannot be classified.
    pub label: Option<CellLabel>,
    /// Roots collide with sites or with each other; not expanded further.
    pub degenerate: bool,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationEdge {
    pub from: usize,
    pub to: usize,
    pub direction: usize,
    pub c: Complex64,
    pub pairing_before: i64,
    pub pairing_after: i64,
    pub degree_changed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedDirection {
    pub node: usize,
    pub direction: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Population {
    pub nodes: Vec<PopulationNode>,
    pub edges: Vec<PopulationEdge>,
    pub skipped: Vec<SkippedDirection>,
}

impl Population {
    /// Distinct degree vectors, in order of first appearance.
    pub fn degree_classes(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for n in &self.nodes {
            if !out.contains(&n.degrees) {
                out.push(n.degrees.clone());
            }
        }
        out
    }
}

fn is_degenerate(problem: &BetheProblem, tuple: &PolyTuple, tol: f64) -> bool {
    let Ok(roots) = tuple.roots(tol) else {
        return true;
    };
    let guard = problem.default_collision_guard();
    let flat: Vec<(Complex64, usize)> = roots.into_iter().flatten().collect();
    if flat.iter().any(|&(_, m)| m > 1) {
        return true;
    }
    for (k, &(w, _)) in flat.iter().enumerate() {
        if problem.sites().iter().any(|s| (s.z - w).norm() <= guard) {
            return true;
        }
        if flat[k + 1..].iter().any(|&(v, _)| (v - w).norm() <= guard) {
            return true;
        }
    }
    false
}

fn same_tuple(a: &PolyTuple, b: &PolyTuple, tol: f64) -> bool {
    a.degrees() == b.degrees()
        && a.polys.iter().zip(&b.polys).all(|(p, q)| {
            let scale = 1.0 + p.max_abs().max(q.max_abs());
            (p - q).max_abs() <= tol * scale
        })
}

fn make_node(problem: &BetheProblem, tuple: PolyTuple, depth: usize, tol: f64) -> PopulationNode {
    let mu = tuple.mu_infinity(problem);
    PopulationNode {
        degrees: tuple.degrees(),
        label: classify_coweight(problem.cartan(), &mu, DEFAULT_CAP).ok(),
        mu_infinity: mu,
        degenerate: is_degenerate(problem, &tuple, tol),
        tuple,
        depth,
    }
}

fn tuple_key(t: &PolyTuple) -> (Vec<usize>, Vec<Complex64>) {
    (
        t.degrees(),
        t.polys
            .iter()
            .flat_map(|p| p.coeffs().iter().copied())
            .collect(),
    )
}

/// Breadth-first closure of `seed` under reproduction in every direction.
pub fn explore_population(
    problem: &BetheProblem,
    seed: &PolyTuple,
    opts: &PopulationOptions,
) -> Population {
    let mut pop = Population {
        nodes: vec![make_node(problem, seed.clone(), 0, opts.tol)],
        ..Default::default()
    };
    let mut frontier = vec![0usize];
    let rank = problem.rank();
    for level in 1..=opts.depth {
        let jobs: Vec<(usize, usize)> = frontier
            .iter()
            .filter(|&&n| !pop.nodes[n].degenerate)
            .flat_map(|&n| (0..rank).map(move |i| (n, i)))
            .collect();
        let nodes = &pop.nodes;
        let results = opts.execution.map(&jobs, |&(n, i)| {
            let tuple = &nodes[n].tuple;
            let f = fertile_antiderivative(problem, tuple, i, opts.tol)?;
            let mut cs = opts.c_samples.clone();
            if let Some(c0) = degree_drop_value(&f) {
                if !cs.iter().any(|c| (c - c0).norm() < 1e-12) {
                    cs.push(c0);
                }
            }
            Ok::<_, Error>(
                cs.into_iter()
                    .filter_map(|c| {
                        reproduce_with(problem, tuple, i, &f, c)
                            .ok()
                            .map(|r| (c, r))
                    })
                    .collect::<Vec<_>>(),
            )
        });
        let mut produced: Vec<(usize, usize, Complex64, Reproduction)> = Vec::new();
        for (&(n, i), res) in jobs.iter().zip(results) {
            match res {
                Ok(list) => produced.extend(list.into_iter().map(|(c, r)| (n, i, c, r))),
                Err(e) => pop.skipped.push(SkippedDirection {
                    node: n,
                    direction: i,
                    reason: e.to_string(),
                }),
            }
        }
        produced.sort_by(|a, b| {
            let (da, ca) = tuple_key(&a.3.tuple);
            let (db, cb) = tuple_key(&b.3.tuple);
            da.cmp(&db)
                .then_with(|| {
                    ca.iter()
                        .zip(&cb)
                        .map(|(x, y)| complex_order(x, y))
                        .find(|o| o.is_ne())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .then(a.0.cmp(&b.0))
                .then(a.1.cmp(&b.1))
        });
        let mut next = Vec::new();
        for (from, i, c, rep) in produced {
            let existing = pop
                .nodes
                .iter()
                .position(|n| same_tuple(&n.tuple, &rep.tuple, opts.dedup_tol));
            let to = match existing {
                Some(k) => k,
                None => {
                    if pop.nodes.len() >= opts.max_nodes {
                        continue;
                    }
                    pop.nodes
                        .push(make_node(problem, rep.tuple.clone(), level, opts.tol));
                    next.push(pop.nodes.len() - 1);
                    pop.nodes.len() - 1
                }
            };
            if to == from {
                continue;
            }
            pop.edges.push(PopulationEdge {
                from,
                to,
                direction: i,
                c,
                pairing_before: rep.pairing_before,
                pairing_after: rep.pairing_after,
                degree_changed: rep.degree_changed,
            });
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    pop
}

/// Max BAE residual of a tuple's roots, or `None` for degenerate tuples.
pub fn tuple_residual(problem: &BetheProblem, tuple: &PolyTuple, tol: f64) -> Option<f64> {
    let (p, roots) = tuple.to_roots(problem, tol).ok()?;
    let r = residual(&p, &roots, p.default_collision_guard()).ok()?;
    Some(r.iter().map(|x| x.norm()).fold(0.0, f64::max))
}
