//! Bethe Ansatz equations for an arbitrary generalized Cartan matrix.
//!
//! Color indices are zero-based throughout the library.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::rootdata::{to_dominant, Coweight, GeneralizedCartanMatrix, WeylWord};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Default cap on Weyl-word length in classification.
pub const DEFAULT_CAP: usize = 10_000;

/// A marked point with its dominant integral coweight.
#[derive(Debug, Clone, PartialEq)]
pub struct Site {
    pub z: Complex64,
    pub weight: Coweight,
}

impl Site {
    pub fn new(z: Complex64, weight: Coweight) -> Self {
        Self { z, weight }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetheProblem {
    cartan: GeneralizedCartanMatrix,
    sites: Vec<Site>,
    colors: Vec<usize>,
    // pairings[i][a] = <alpha_a, lambda_i>
    pairings: Vec<Vec<f64>>,
}

impl BetheProblem {
    pub fn new(
        cartan: GeneralizedCartanMatrix,
        sites: Vec<Site>,
        colors: Vec<usize>,
    ) -> Result<Self> {
        let rank = cartan.rank();
        for s in &sites {
            if s.weight.rank() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: s.weight.rank(),
                });
            }
            if !s.weight.is_dominant() || !s.weight.is_integral() {
                return Err(Error::InvalidProblem(format!(
                    "site weight {} at {} is not dominant integral",
                    s.weight, s.z
                )));
            }
        }
        for (i, a) in sites.iter().enumerate() {
            for b in &sites[i + 1..] {
                if a.z == b.z {
                    return Err(Error::InvalidProblem(format!("repeated site {}", a.z)));
                }
            }
        }
        if let Some(&c) = colors.iter().find(|&&c| c >= rank) {
            return Err(Error::IndexOutOfRange { index: c, rank });
        }
        let pairings = sites.iter().map(|s| s.weight.pairings_f64()).collect();
        Ok(Self {
            cartan,
            sites,
            colors,
            pairings,
        })
    }

    pub fn cartan(&self) -> &GeneralizedCartanMatrix {
        &self.cartan
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn num_roots(&self) -> usize {
        self.colors.len()
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// The same sites with a different color list.
    pub fn with_colors(&self, colors: Vec<usize>) -> Result<Self> {
        Self::new(self.cartan.clone(), self.sites.clone(), colors)
    }

    /// Number of roots of each color.
    pub fn color_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.rank()];
        for &c in &self.colors {
            counts[c] += 1;
        }
        counts
    }

    fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.sites {
            for b in &self.sites {
                d = d.max((a.z - b.z).norm());
            }
        }
        d
    }

    /// Default collision guard: `1e-6` times the diameter of the sites
    /// (or `1e-6` when there is at most one site).
    pub fn default_collision_guard(&self) -> f64 {
        let d = self.diameter();
        1e-6 * if d > 0.0 { d } else { 1.0 }
    }

    pub fn centroid(&self) -> Complex64 {
        if self.sites.is_empty() {
            return ZERO;
        }
        self.sites.iter().map(|s| s.z).sum::<Complex64>() / self.sites.len() as f64
    }

    /// `sum lambda_i - sum alpha_check_{c(j)}`.
    pub fn residue_at_infinity(&self) -> Coweight {
        let rank = self.rank();
        let total = self
            .sites
            .iter()
            .fold(Coweight::zero(rank), |acc, s| &acc + &s.weight);
        self.colors
            .iter()
            .fold(total, |acc, &c| &acc - &self.cartan.simple_coroot(c))
    }

    fn check_collisions(&self, roots: &[Complex64], guard: f64) -> Result<()> {
        if roots.len() != self.colors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.colors.len(),
                found: roots.len(),
            });
        }
        for (j, &w) in roots.iter().enumerate() {
            for (i, s) in self.sites.iter().enumerate() {
                let d = (w - s.z).norm();
                if d <= guard {
                    return Err(Error::Collision {
                        first: format!("w{}", j + 1),
                        second: format!("z{}", i + 1),
                        distance: d,
                    });
                }
            }
            for (k, &v) in roots.iter().enumerate().skip(j + 1) {
                let d = (w - v).norm();
                if d <= guard {
                    return Err(Error::Collision {
                        first: format!("w{}", j + 1),
                        second: format!("w{}", k + 1),
                        distance: d,
                    });
                }
            }
        }
        Ok(())
    }

    fn residual_unchecked(&self, roots: &[Complex64]) -> Vec<Complex64> {
        let a = &self.cartan;
        roots
            .iter()
            .enumerate()
            .map(|(j, &w)| {
                let cj = self.colors[j];
                let mut e = ZERO;
                for (s, p) in self.sites.iter().zip(&self.pairings) {
                    e += p[cj] / (w - s.z);
                }
                for (k, &v) in roots.iter().enumerate() {
                    if k != j {
                        e -= a.get(self.colors[k], cj) as f64 / (w - v);
                    }
                }
                e
            })
            .collect()
    }

    fn jacobian_unchecked(&self, roots: &[Complex64]) -> DMatrix<Complex64> {
        let a = &self.cartan;
        let m = roots.len();
        DMatrix::from_fn(m, m, |j, k| {
            let cj = self.colors[j];
            let w = roots[j];
            if j == k {
                let mut d = ZERO;
                for (s, p) in self.sites.iter().zip(&self.pairings) {
                    d -= p[cj] / ((w - s.z) * (w - s.z));
                }
                for (l, &v) in roots.iter().enumerate() {
                    if l != j {
                        d += a.get(self.colors[l], cj) as f64 / ((w - v) * (w - v));
                    }
                }
                d
            } else {
                let v = roots[k];
                -(a.get(self.colors[k], cj) as f64) / ((w - v) * (w - v))
            }
        })
    }
}

impl BetheProblem {
    /// Jacobian of the equations with denominators cleared, row `j` divided
    /// back by its denominator. It agrees with the plain Jacobian at a
    /// solution, but the equations no longer decay at infinity, which keeps
    /// Newton from drifting outward along the scaling direction.
    fn cleared_step_matrix(&self, roots: &[Complex64], f: &[Complex64]) -> DMatrix<Complex64> {
        let mut k = self.jacobian_unchecked(roots);
        for (j, &w) in roots.iter().enumerate() {
            let mut diag: Complex64 = self.sites.iter().map(|s| 1.0 / (w - s.z)).sum();
            for (l, &v) in roots.iter().enumerate() {
                if l != j {
                    diag += 1.0 / (w - v);
                    k[(j, l)] -= f[j] / (w - v);
                }
            }
            k[(j, j)] += f[j] * diag;
        }
        k
    }
}

/// Equation values at `roots`; fails if two points are within `guard`.
pub fn residual(problem: &BetheProblem, roots: &[Complex64], guard: f64) -> Result<Vec<Complex64>> {
    problem.check_collisions(roots, guard)?;
    Ok(problem.residual_unchecked(roots))
}

/// Analytic derivative of [`residual`]: entry `(j, k)` is `d eq_j / d w_k`.
pub fn jacobian(
    problem: &BetheProblem,
    roots: &[Complex64],
    guard: f64,
) -> Result<DMatrix<Complex64>> {
    problem.check_collisions(roots, guard)?;
    Ok(problem.jacobian_unchecked(roots))
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// A converged root configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheSolution {
    pub roots: Vec<Complex64>,
    /// Max-norm of the equations at `roots`.
    pub residual: f64,
    /// Numerical rank of the Jacobian at `roots`. Less than the number of
    /// roots means the solution sits in a positive-dimensional family.
    pub jacobian_rank: usize,
    pub iterations: usize,
}

impl BetheSolution {
    pub fn empty() -> Self {
        Self {
            roots: Vec::new(),
            residual: 0.0,
            jacobian_rank: 0,
            iterations: 0,
        }
    }

    /// Builds a solution record for given roots, evaluating the residual and
    /// Jacobian rank.
    pub fn evaluate(problem: &BetheProblem, roots: Vec<Complex64>, guard: f64) -> Result<Self> {
        let r = residual(problem, &roots, guard)?;
        let jac = problem.jacobian_unchecked(&roots);
        Ok(Self {
            residual: max_norm(&r),
            jacobian_rank: numerical_rank(&jac),
            roots,
            iterations: 0,
        })
    }

    pub fn is_isolated(&self) -> bool {
        self.jacobian_rank == self.roots.len()
    }

    /// Roots of color `c`.
    pub fn roots_of_color<'a>(
        &'a self,
        problem: &'a BetheProblem,
        c: usize,
    ) -> impl Iterator<Item = Complex64> + 'a {
        self.roots
            .iter()
            .zip(problem.colors())
            .filter(move |(_, &col)| col == c)
            .map(|(&w, _)| w)
    }

    /// Reorders roots within each color class lexicographically by
    /// (real, imaginary) part.
    pub fn canonicalize(&mut self, problem: &BetheProblem) {
        for c in 0..problem.rank() {
            let idx: Vec<usize> = (0..self.roots.len())
                .filter(|&j| problem.colors()[j] == c)
                .collect();
            let mut vals: Vec<Complex64> = idx.iter().map(|&j| self.roots[j]).collect();
            vals.sort_by(complex_order);
            for (&j, v) in idx.iter().zip(vals) {
                self.roots[j] = v;
            }
        }
    }

    /// Equality up to color-preserving permutation, within `tol`.
    pub fn same_as(&self, other: &Self, problem: &BetheProblem, tol: f64) -> bool {
        if self.roots.len() != other.roots.len() {
            return false;
        }
        (0..problem.rank()).all(|c| {
            let mut rest: Vec<Complex64> = other.roots_of_color(problem, c).collect();
            for w in self.roots_of_color(problem, c) {
                match rest.iter().position(|&v| (v - w).norm() <= tol) {
                    Some(k) => {
                        rest.swap_remove(k);
                    }
                    None => return false,
                }
            }
            rest.is_empty()
        })
    }
}

pub(crate) fn complex_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn numerical_rank(j: &DMatrix<Complex64>) -> usize {
    if j.is_empty() {
        return 0;
    }
    let sv = j.clone().singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter()
        .filter(|&&s| s > 1e-8 * top.max(f64::MIN_POSITIVE))
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iter: usize,
    /// Target max-norm of the residual.
    pub tol: f64,
    /// Collision guard radius; `None` uses the problem default.
    pub collision_guard: Option<f64>,
    /// Initial step length multiplier in `(0, 1]`.
    pub damping: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol: 1e-12,
            collision_guard: None,
            damping: 1.0,
        }
    }
}

fn solve_step(j: &DMatrix<Complex64>, f: &[Complex64]) -> Result<DVector<Complex64>> {
    let rhs = DVector::from_iterator(f.len(), f.iter().map(|c| -c));
    if let Some(x) = j.clone().lu().solve(&rhs) {
        if x.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Ok(x);
        }
    }
    // Rank-deficient Jacobian: least-squares step.
    let svd = j.clone().svd(true, true);
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    svd.solve(&rhs, 1e-12 * top)
        .map_err(|e| Error::LinearSolve(e.to_string()))
}

/// Damped Newton iteration from `start`.
pub fn newton_solve(
    problem: &BetheProblem,
    start: &[Complex64],
    opts: &NewtonOptions,
) -> Result<BetheSolution> {
    let guard = opts
        .collision_guard
        .unwrap_or_else(|| problem.default_collision_guard());
    let mut w = start.to_vec();
    let mut f = residual(problem, &w, guard)?;
    let mut norm = max_norm(&f);
    let centre = problem.centroid();
    // Weighting by distance from the centroid removes the spurious descent
    // direction towards infinity, where every equation decays like 1/w.
    let merit = |w: &[Complex64], f: &[Complex64]| {
        w.iter()
            .zip(f)
            .map(|(x, e)| e.norm() * (1.0 + (x - centre).norm()))
            .fold(0.0, f64::max)
    };
    let mut current = merit(&w, &f);
    let far = 1e8 * (1.0 + problem.diameter() + problem.centroid().norm());
    for it in 0..=opts.max_iter {
        if norm < opts.tol {
            let jac = problem.jacobian_unchecked(&w);
            let mut sol = BetheSolution {
                roots: w,
                residual: norm,
                jacobian_rank: numerical_rank(&jac),
                iterations: it,
            };
            sol.canonicalize(problem);
            return Ok(sol);
        }
        if it == opts.max_iter {
            break;
        }
        let step = solve_step(&problem.cleared_step_matrix(&w, &f), &f)?;
        let mut t = opts.damping;
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<Complex64> = w.iter().zip(step.iter()).map(|(a, d)| a + d * t).collect();
            if let Ok(tf) = residual(problem, &trial, guard) {
                let tm = merit(&trial, &tf);
                if tm.is_finite() && tm < current {
                    accepted = Some((trial, tf, tm));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((nw, nf, nm)) = accepted else {
            break;
        };
        w = nw;
        norm = max_norm(&nf);
        f = nf;
        current = nm;
        if w.iter().any(|x| x.norm() > far) {
            break;
        }
    }
    Err(Error::Divergence {
        iterations: opts.max_iter,
        residual: norm,
        last: w,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiStartOptions {
    pub num_starts: usize,
    pub seed: u64,
    /// Two solutions are the same if their per-color root multisets match
    /// within this distance.
    pub dedup_tol: f64,
    /// Radius of the start disc around the centroid of the sites; `None`
    /// picks twice the largest site distance from the centroid (at least 1).
    pub radius: Option<f64>,
    pub newton: NewtonOptions,
    pub execution: Execution,
}

impl Default for MultiStartOptions {
    fn default() -> Self {
        Self {
            num_starts: 64,
            seed: 0,
            dedup_tol: 1e-8,
            radius: None,
            newton: NewtonOptions::default(),
            execution: Execution::default(),
        }
    }
}

/// Start configuration number `k` for the given seed.
pub fn start_point(problem: &BetheProblem, seed: u64, k: usize, radius: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    let c = problem.centroid();
    (0..problem.num_roots())
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let th = std::f64::consts::TAU * rng.random::<f64>();
            c + Complex64::from_polar(r, th)
        })
        .collect()
}

fn default_radius(problem: &BetheProblem) -> f64 {
    let c = problem.centroid();
    let spread = problem
        .sites()
        .iter()
        .map(|s| (s.z - c).norm())
        .fold(0.0, f64::max);
    (2.0 * spread).max(1.0)
}

/// Solutions found by a batch of Newton runs, plus the runs that failed.
#[derive(Debug, Clone)]
pub struct MultiStartReport {
    pub solutions: Vec<BetheSolution>,
    /// `(start index, error)` for every start that did not converge.
    pub failures: Vec<(usize, Error)>,
}

/// Newton from many random starts; divergent starts are dropped and
/// duplicates merged. Output is sorted canonically and does not depend on
/// the execution mode.
pub fn multi_start_solve(problem: &BetheProblem, opts: &MultiStartOptions) -> Vec<BetheSolution> {
    multi_start_report(problem, opts).solutions
}

pub fn multi_start_report(problem: &BetheProblem, opts: &MultiStartOptions) -> MultiStartReport {
    if problem.num_roots() == 0 {
        return MultiStartReport {
            solutions: vec![BetheSolution::empty()],
            failures: Vec::new(),
        };
    }
    let radius = opts.radius.unwrap_or_else(|| default_radius(problem));
    let starts: Vec<Vec<Complex64>> = (0..opts.num_starts)
        .map(|k| start_point(problem, opts.seed, k, radius))
        .collect();
    solve_from_starts(problem, &starts, opts)
}

/// Newton from explicit starting configurations, merged like
/// [`multi_start_solve`].
pub fn solve_from_starts(
    problem: &BetheProblem,
    starts: &[Vec<Complex64>],
    opts: &MultiStartOptions,
) -> MultiStartReport {
    let results = opts.execution.map(starts, |start| {
        if start.len() != problem.num_roots() {
            return Err(Error::DimensionMismatch {
                expected: problem.num_roots(),
                found: start.len(),
            });
        }
        newton_solve(problem, start, &opts.newton)
    });
    let mut found: Vec<BetheSolution> = Vec::new();
    let mut failures = Vec::new();
    for (k, res) in results.into_iter().enumerate() {
        match res {
            Ok(sol) => {
                if !found
                    .iter()
                    .any(|f| f.same_as(&sol, problem, opts.dedup_tol))
                {
                    found.push(sol);
                }
            }
            Err(e) => failures.push((k, e)),
        }
    }
    found.sort_by(|a, b| {
        a.roots
            .iter()
            .zip(&b.roots)
            .map(|(x, y)| complex_order(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    MultiStartReport {
        solutions: found,
        failures,
    }
}

/// `sum lambda_i - sum alpha_check_{c(j)}`; depends only on the problem.
pub fn residue_at_infinity(problem: &BetheProblem, _solution: &BetheSolution) -> Coweight {
    problem.residue_at_infinity()
}

/// `(lambda_inf, y)` with `mu_inf = y(lambda_inf + rho) - rho`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellLabel {
    pub mu_infinity: Coweight,
    pub lambda_infinity: Coweight,
    pub word: WeylWord,
}

/// Classifies a residue at infinity by its Weyl chamber.
pub fn classify_coweight(
    cartan: &GeneralizedCartanMatrix,
    mu: &Coweight,
    cap: usize,
) -> Result<CellLabel> {
    let minus_one = num_rational::Rational64::from_integer(-1);
    if let Some(index) = mu.pairings().iter().position(|&p| p == minus_one) {
        return Err(Error::ForbiddenPairing { index });
    }
    let rho = cartan.rho();
    let (dom, word) = to_dominant(cartan, &(mu + &rho), cap)?;
    if let Some(index) = dom.pairings().iter().position(|p| *p == 0.into()) {
        return Err(Error::SingularOrbit { index });
    }
    Ok(CellLabel {
        mu_infinity: mu.clone(),
        lambda_infinity: &dom - &rho,
        word,
    })
}

pub fn classify_cell(
    problem: &BetheProblem,
    solution: &BetheSolution,
    cap: usize,
) -> Result<CellLabel> {
    classify_coweight(
        problem.cartan(),
        &residue_at_infinity(problem, solution),
        cap,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn sl2(sites: &[(f64, i64)], m: usize) -> BetheProblem {
        let a = GeneralizedCartanMatrix::parse("A1").unwrap();
        let sites = sites
            .iter()
            .map(|&(z, p)| Site::new(c(z), Coweight::from_integers(&[p])))
            .collect();
        BetheProblem::new(a, sites, vec![0; m]).unwrap()
    }

    #[test]
    fn residual_examples() {
        let p = sl2(&[(0.0, 1), (2.0, 1)], 1);
        assert!(residual(&p, &[c(1.0)], 1e-9).unwrap()[0].norm() < 1e-15);
        let r = residual(&p, &[c(0.5)], 1e-9).unwrap()[0];
        assert!((r - c(4.0 / 3.0)).norm() < 1e-14);
        let j = jacobian(&p, &[c(1.0)], 1e-9).unwrap();
        assert!((j[(0, 0)] - c(-2.0)).norm() < 1e-14);
        let empty = sl2(&[(0.0, 1), (2.0, 1)], 0);
        assert!(residual(&empty, &[], 1e-9).unwrap().is_empty());
        assert!(matches!(
            residual(&p, &[c(2.0)], 1e-9),
            Err(Error::Collision { .. })
        ));
    }

    #[test]
    fn newton_examples() {
        let p = sl2(&[(0.0, 1), (2.0, 1)], 1);
        let s = newton_solve(&p, &[c(0.9)], &NewtonOptions::default()).unwrap();
        assert!((s.roots[0] - c(1.0)).norm() < 1e-12);

        let lonely = sl2(&[(0.0, 1)], 1);
        assert!(matches!(
            newton_solve(&lonely, &[c(0.9)], &NewtonOptions::default()),
            Err(Error::Divergence { .. })
        ));

        let fam = sl2(&[(0.0, 1)], 2);
        let s = newton_solve(&fam, &[c(0.9), c(-1.1)], &NewtonOptions::default()).unwrap();
        assert!((s.roots[0] + s.roots[1]).norm() < 1e-8);
        assert_eq!(s.jacobian_rank, 1);
        assert!(!s.is_isolated());
    }

    #[test]
    fn classification_examples() {
        let p = sl2(&[(0.0, 1), (2.0, 1)], 1);
        let s = BetheSolution::evaluate(&p, vec![c(1.0)], 1e-9).unwrap();
        let label = classify_cell(&p, &s, DEFAULT_CAP).unwrap();
        assert_eq!(label.lambda_infinity, Coweight::from_integers(&[0]));
        assert!(label.word.is_empty());

        let fam = sl2(&[(0.0, 1)], 2);
        let s = BetheSolution::evaluate(&fam, vec![c(1.0), c(-1.0)], 1e-9).unwrap();
        assert_eq!(
            residue_at_infinity(&fam, &s),
            Coweight::from_integers(&[-3])
        );
        let label = classify_cell(&fam, &s, DEFAULT_CAP).unwrap();
        assert_eq!(label.lambda_infinity, Coweight::from_integers(&[1]));
        assert_eq!(label.word, WeylWord(vec![0]));

        let a = GeneralizedCartanMatrix::parse("A1").unwrap();
        assert!(matches!(
            classify_coweight(&a, &Coweight::from_integers(&[-1]), DEFAULT_CAP),
            Err(Error::ForbiddenPairing { index: 0 })
        ));
    }

    #[test]
    fn multi_start_three_sites() {
        let p = sl2(&[(0.0, 1), (1.0, 1), (4.0, 1)], 1);
        let sols = multi_start_solve(&p, &MultiStartOptions::default());
        assert_eq!(sols.len(), 2);
        // 3w^2 - 10w + 4 = 0
        let disc: f64 = 100.0 - 48.0;
        let mut expect = [(10.0 - disc.sqrt()) / 6.0, (10.0 + disc.sqrt()) / 6.0];
        expect.sort_by(f64::total_cmp);
        for (s, e) in sols.iter().zip(expect) {
            assert!((s.roots[0] - c(e)).norm() < 1e-10);
        }
    }
}
