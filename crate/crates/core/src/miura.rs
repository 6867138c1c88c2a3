//! Cartan connections and their Miura transforms to scalar opers.

use num_complex::Complex64;

use crate::bethe::{BetheProblem, BetheSolution};
use crate::error::{Error, Result};
use crate::ratfun::RatFun;
use crate::rootdata::{CartanKind, Coweight, GeneralizedCartanMatrix};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `d/dt + sum residue / (t - pole)` with coweight residues.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanConnection {
    cartan: GeneralizedCartanMatrix,
    terms: Vec<(Complex64, Coweight)>,
}

impl CartanConnection {
    /// Coincident poles have their residues added.
    pub fn new(cartan: GeneralizedCartanMatrix, terms: Vec<(Complex64, Coweight)>) -> Result<Self> {
        let rank = cartan.rank();
        let mut merged: Vec<(Complex64, Coweight)> = Vec::new();
        for (p, r) in terms {
            if r.rank() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: r.rank(),
                });
            }
            match merged.iter_mut().find(|(q, _)| *q == p) {
                Some((_, acc)) => *acc = &*acc + &r,
                None => merged.push((p, r)),
            }
        }
        Ok(Self {
            cartan,
            terms: merged,
        })
    }

    pub fn zero(cartan: GeneralizedCartanMatrix) -> Self {
        Self {
            cartan,
            terms: Vec::new(),
        }
    }

    pub fn cartan(&self) -> &GeneralizedCartanMatrix {
        &self.cartan
    }

    pub fn terms(&self) -> &[(Complex64, Coweight)] {
        &self.terms
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// `u_a(t) = sum <alpha_a, residue> / (t - pole)`.
    pub fn component(&self, a: usize) -> RatFun {
        self.terms.iter().fold(RatFun::zero(), |acc, (p, r)| {
            let c = r.pairings_f64()[a];
            if c == 0.0 {
                acc
            } else {
                &acc + &RatFun::pole_term(*p, 1, Complex64::new(c, 0.0))
            }
        })
    }

    pub fn components(&self) -> Vec<RatFun> {
        (0..self.rank()).map(|a| self.component(a)).collect()
    }

    /// Adds `f * alpha_check_i` to the connection, where `f` has only simple
    /// poles with integer residues.
    pub fn shifted_by(&self, i: usize, poles: &[(Complex64, i64)]) -> Result<Self> {
        let coroot = self.cartan.simple_coroot(i);
        let mut terms = self.terms.clone();
        for &(p, k) in poles {
            terms.push((p, coroot.scale(k)));
        }
        let mut out = Self::new(self.cartan.clone(), terms)?;
        let zero = Coweight::zero(self.rank());
        out.terms.retain(|(_, r)| *r != zero);
        Ok(out)
    }
}

/// Residues `-lambda_i` at sites and `alpha_check_{c(j)}` at roots.
pub fn connection_from_solution(
    problem: &BetheProblem,
    solution: &BetheSolution,
) -> CartanConnection {
    connection_from_roots(problem, &solution.roots)
}

pub fn connection_from_roots(problem: &BetheProblem, roots: &[Complex64]) -> CartanConnection {
    let a = problem.cartan();
    let mut terms: Vec<(Complex64, Coweight)> =
        problem.sites().iter().map(|s| (s.z, -&s.weight)).collect();
    for (&w, &c) in roots.iter().zip(problem.colors()) {
        terms.push((w, a.simple_coroot(c)));
    }
    CartanConnection::new(a.clone(), terms).expect("ranks agree by construction")
}

/// `2 rho + sum of residues`.
pub fn residue_at_infinity_connection(conn: &CartanConnection) -> Coweight {
    conn.terms
        .iter()
        .fold(conn.cartan.rho().scale(2), |acc, (_, r)| &acc + r)
}

/// Classical types with a Miura factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperKind {
    /// `sl_{n}`, operator order `n`.
    A { n: usize },
    /// `so_{2n+1}`, operator order `2n + 1`.
    B { n: usize },
    /// `sp_{2n}`, operator order `2n`.
    C { n: usize },
}

impl OperKind {
    pub fn from_cartan(a: &GeneralizedCartanMatrix) -> Result<Self> {
        let r = a.rank();
        match a.kind() {
            CartanKind::A => Ok(OperKind::A { n: r + 1 }),
            CartanKind::B if r >= 2 => Ok(OperKind::B { n: r }),
            CartanKind::C if r >= 2 => Ok(OperKind::C { n: r }),
            _ => Err(Error::UnsupportedType(format!(
                "no scalar Miura transformation for {a}"
            ))),
        }
    }

    pub fn order(self) -> usize {
        match self {
            OperKind::A { n } => n,
            OperKind::B { n } => 2 * n + 1,
            OperKind::C { n } => 2 * n,
        }
    }
}

/// Coordinates `u_1..u_n` with `u_k - u_{k+1} = u`-component `k` and
/// `sum u_k = 0` (type A only).
pub fn epsilon_coordinates(conn: &CartanConnection, n: usize) -> Result<Vec<RatFun>> {
    if conn.cartan.kind() != CartanKind::A {
        return Err(Error::UnsupportedType(format!(
            "{} is not of type A",
            conn.cartan
        )));
    }
    if conn.rank() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: conn.rank() + 1,
            found: n,
        });
    }
    let d = conn.components();
    // u_n = -(1/n) sum_j j d_j, u_k = u_{k+1} + d_k
    let mut last = RatFun::zero();
    for (j, dj) in d.iter().enumerate() {
        last = &last + &dj.scale(Complex64::new(-((j + 1) as f64) / n as f64, 0.0));
    }
    let mut u = vec![last];
    for k in (0..n - 1).rev() {
        let next = &u[0] + &d[k];
        u.insert(0, next);
    }
    Ok(u)
}

/// The diagonal entries of the connection in the defining representation:
/// `u_1..u_n` for types A, B and C.
pub fn diagonal_coordinates(conn: &CartanConnection) -> Result<Vec<RatFun>> {
    let kind = OperKind::from_cartan(&conn.cartan)?;
    match kind {
        OperKind::A { n } => epsilon_coordinates(conn, n),
        OperKind::B { n } | OperKind::C { n } => {
            let d = conn.components();
            let half = if matches!(kind, OperKind::C { .. }) {
                0.5
            } else {
                1.0
            };
            let mut u = vec![d[n - 1].scale(Complex64::new(half, 0.0))];
            for k in (0..n - 1).rev() {
                let next = &u[0] + &d[k];
                u.insert(0, next);
            }
            Ok(u)
        }
    }
}

/// Linear differential operator `sum coeffs[j] d^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp {
    pub coeffs: Vec<RatFun>,
}

impl DiffOp {
    pub fn identity() -> Self {
        Self {
            coeffs: vec![RatFun::constant(ONE)],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `(d + f) o self`, using `d o g = g d + g'`.
    pub fn left_factor(&self, f: &RatFun) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![RatFun::zero(); n + 1];
        for (j, a) in self.coeffs.iter().enumerate() {
            out[j + 1] = &out[j + 1] + a;
            out[j] = &out[j] + &(&a.derivative() + &(f * a));
        }
        Self { coeffs: out }
    }

    /// Formal adjoint `sum (-d)^j o coeffs[j]`.
    pub fn adjoint(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![RatFun::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let mut deriv = c.clone();
            // (d)^j o c = sum_i binom(j, i) c^{(j-i)} d^i
            let mut ders = vec![c.clone()];
            for _ in 0..j {
                deriv = deriv.derivative();
                ders.push(deriv.clone());
            }
            for i in 0..=j {
                let b = binomial(j, i) as f64 * sign;
                out[i] = &out[i] + &ders[j - i].scale(Complex64::new(b, 0.0));
            }
        }
        Self { coeffs: out }
    }

    pub fn eval_coeffs(&self, t: Complex64) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.eval(t)).collect()
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// `L = d^n + v_1 d^{n-2} + ... + v_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarOper {
    pub kind: OperKind,
    /// `v_1..v_{n-1}`.
    pub v: Vec<RatFun>,
}

impl ScalarOper {
    pub fn order(&self) -> usize {
        self.kind.order()
    }

    pub fn to_diffop(&self) -> DiffOp {
        let n = self.order();
        let mut coeffs = vec![RatFun::zero(); n + 1];
        coeffs[n] = RatFun::constant(ONE);
        for (k, vk) in self.v.iter().enumerate() {
            coeffs[n - 2 - k] = vk.clone();
        }
        DiffOp { coeffs }
    }
}

fn sample_points(op: &DiffOp) -> Vec<Complex64> {
    let poles: Vec<Complex64> = op.coeffs.iter().flat_map(|c| c.poles()).collect();
    let scale = 1.0 + poles.iter().map(|p| p.norm()).fold(0.0, f64::max);
    (0..10)
        .map(|k| {
            let th = 0.7 + 0.61 * k as f64;
            Complex64::from_polar(scale * (1.1 + 0.07 * k as f64), th)
        })
        .collect()
}

/// Product of first-order factors, as a full operator.
pub fn miura_product(conn: &CartanConnection) -> Result<DiffOp> {
    let kind = OperKind::from_cartan(&conn.cartan)?;
    let u = diagonal_coordinates(conn)?;
    let mut factors: Vec<RatFun> = u.clone();
    let mut middle = false;
    match kind {
        OperKind::A { .. } => {}
        OperKind::C { .. } => factors.extend(u.iter().rev().map(|f| -f)),
        OperKind::B { .. } => {
            middle = true;
            factors.extend(u.iter().rev().map(|f| -f));
        }
    }
    let split = u.len();
    let mut op = DiffOp::identity();
    for (idx, f) in factors.iter().enumerate().rev() {
        op = op.left_factor(f);
        if middle && idx == split {
            op = op.left_factor(&RatFun::zero());
        }
    }
    Ok(op)
}

/// Miura transformation to the scalar oper of the connection's type.
pub fn miura_scalar_oper(conn: &CartanConnection, tol: f64) -> Result<ScalarOper> {
    let kind = OperKind::from_cartan(&conn.cartan)?;
    let op = miura_product(conn)?;
    let n = op.order();
    let c1 = &op.coeffs[n - 1];
    let magnitude = sample_points(&op)
        .iter()
        .map(|&t| c1.eval(t).norm())
        .fold(0.0, f64::max);
    if magnitude > tol {
        return Err(Error::MiuraConsistency { magnitude });
    }
    let v = (2..=n).map(|k| op.coeffs[n - k].clone()).collect();
    Ok(ScalarOper { kind, v })
}

/// Negative-order Laurent data of every `v_k` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRegularity {
    pub point: Complex64,
    /// `tails[k]` lists `(order, coefficient)` for `v_{k+1}`, orders < 0.
    pub tails: Vec<Vec<(i32, Complex64)>>,
    pub erased: bool,
}

impl PointRegularity {
    pub fn max_tail(&self) -> f64 {
        self.tails
            .iter()
            .flatten()
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// Coefficient of `(t - point)^{-1}` in `v_1`.
    pub fn simple_pole_v1(&self) -> Complex64 {
        self.tails
            .first()
            .and_then(|t| t.iter().find(|(k, _)| *k == -1))
            .map_or(Complex64::new(0.0, 0.0), |&(_, c)| c)
    }
}

pub fn regularity_report(
    oper: &ScalarOper,
    points: &[Complex64],
    tol: f64,
) -> Vec<PointRegularity> {
    points
        .iter()
        .map(|&p| {
            let tails: Vec<Vec<(i32, Complex64)>> = oper
                .v
                .iter()
                .map(|vk| vk.local_jet(p, -1).principal_part())
                .collect();
            let erased = tails.iter().flatten().all(|(_, c)| c.norm() < tol);
            PointRegularity {
                point: p,
                tails,
                erased,
            }
        })
        .collect()
}

/// `-(p/2)(p/2 + 1)`: the double-pole coefficient of `v_1` at an `sl_2`
/// site with pairing `p`.
pub fn sl2_site_leading(p: i64) -> f64 {
    let h = p as f64 / 2.0;
    -h * (h + 1.0)
}
