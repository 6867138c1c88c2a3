//! Tensor products of `sl_n` Verma modules, quadratic Gaudin hamiltonians and
//! Bethe vectors.
//!
//! Indices of `gl_n` matrix units are zero-based. `F_{ab}` with `a > b` is a
//! lowering element of root content `alpha_b + .. + alpha_{a-1}`, and the
//! simple lowering element of color `c` is `F_{c+1,c}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::bethe::{BetheProblem, BetheSolution};
use crate::error::{Error, Result};
use crate::miura::{connection_from_solution, miura_scalar_oper};
use crate::par::Execution;
use crate::ratfun::RatFun;
use crate::rootdata::CartanKind;

/// Matrix unit `E_{ab}`.
pub type Unit = (usize, usize);
/// Normal-ordered product of lowering units, sorted ascending.
pub type Monomial = Vec<Unit>;
/// One monomial per tensor factor.
pub type BasisKey = Vec<Monomial>;

type Combo = Vec<(Monomial, f64)>;

/// Default bound on the total height of a weight drop.
pub const DEFAULT_CUTOFF: usize = 8;

/// Ratio between the generating function of Gaudin eigenvalues and `v_1` of
/// the Miura oper, for `sl_2` with the trace form.
pub const KAPPA_SL2: f64 = -1.0;

fn cartan_a(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n - 1, n - 1, |i, j| match i.abs_diff(j) {
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    })
}

fn inverse_cartan(n: usize) -> DMatrix<f64> {
    cartan_a(n)
        .try_inverse()
        .expect("type A Cartan matrix is invertible")
}

/// `(lambda, mu)` under the trace form, from Dynkin labels.
pub fn weight_pairing(n: usize, p: &[i64], q: &[i64]) -> f64 {
    let g = inverse_cartan(n);
    let pv = DVector::from_iterator(n - 1, p.iter().map(|&x| x as f64));
    let qv = DVector::from_iterator(n - 1, q.iter().map(|&x| x as f64));
    pv.dot(&(&g * qv))
}

/// `(lambda, lambda + 2 rho) / 2` under the trace form.
pub fn casimir_scalar(n: usize, p: &[i64]) -> f64 {
    let two_rho = vec![2; n - 1];
    let shifted: Vec<i64> = p.iter().zip(&two_rho).map(|(a, b)| a + b).collect();
    0.5 * weight_pairing(n, p, &shifted)
}

fn commutator(x: Unit, y: Unit) -> Vec<(Unit, f64)> {
    let mut out = Vec::with_capacity(2);
    if x.1 == y.0 {
        out.push(((x.0, y.1), 1.0));
    }
    if y.1 == x.0 {
        out.push(((y.0, x.1), -1.0));
    }
    out
}

fn collect(terms: impl IntoIterator<Item = (Monomial, f64)>) -> Combo {
    let mut map: BTreeMap<Monomial, f64> = BTreeMap::new();
    for (m, c) in terms {
        *map.entry(m).or_insert(0.0) += c;
    }
    map.into_iter().filter(|(_, c)| *c != 0.0).collect()
}

/// `M_{lambda_1} (x) .. (x) M_{lambda_N}` for `sl_n`, realized inside `gl_n`.
#[derive(Debug)]
pub struct TensorModule {
    n: usize,
    weights: Vec<Vec<i64>>,
    gl_weights: Vec<Vec<f64>>,
    memo: Mutex<HashMap<(usize, Unit, Monomial), Combo>>,
}

impl Clone for TensorModule {
    fn clone(&self) -> Self {
        Self::new(self.n, self.weights.clone()).expect("validated on construction")
    }
}

impl TensorModule {
    /// `weights[k]` are the Dynkin labels of the `k`-th highest weight.
    pub fn new(n: usize, weights: Vec<Vec<i64>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidProblem(format!(
                "sl_{n} is not a simple Lie algebra"
            )));
        }
        for w in &weights {
            if w.len() != n - 1 {
                return Err(Error::DimensionMismatch {
                    expected: n - 1,
                    found: w.len(),
                });
            }
        }
        let gl_weights = weights
            .iter()
            .map(|p| {
                (0..n)
                    .map(|a| p[a.min(n - 1)..].iter().sum::<i64>() as f64)
                    .collect()
            })
            .collect();
        Ok(Self {
            n,
            weights,
            gl_weights,
            memo: Mutex::new(HashMap::new()),
        })
    }

    /// Module of a type-A problem: one factor per site.
    pub fn from_problem(problem: &BetheProblem) -> Result<Self> {
        let a = problem.cartan();
        if a.kind() != CartanKind::A {
            return Err(Error::UnsupportedType(format!(
                "Gaudin models are implemented for sl_n only, got {:?}",
                a.kind()
            )));
        }
        let weights = problem
            .sites()
            .iter()
            .map(|s| {
                s.weight
                    .to_integers()
                    .ok_or_else(|| Error::InvalidProblem("site weights must be integral".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(a.rank() + 1, weights)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_factors(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    /// `E_{ab}` applied to a normal-ordered monomial on factor `k`.
    pub fn act_monomial(&self, k: usize, x: Unit, mono: &[Unit]) -> Combo {
        let key = (k, x, mono.to_vec());
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return hit.clone();
        }
        let out = self.act_uncached(k, x, mono);
        self.memo
            .lock()
            .expect("memo lock")
            .insert(key, out.clone());
        out
    }

    fn act_uncached(&self, k: usize, x: Unit, mono: &[Unit]) -> Combo {
        let (a, b) = x;
        let Some((&first, rest)) = mono.split_first() else {
            return match a.cmp(&b) {
                std::cmp::Ordering::Less => Vec::new(),
                std::cmp::Ordering::Equal => collect([(Vec::new(), self.gl_weights[k][a])]),
                std::cmp::Ordering::Greater => vec![(vec![x], 1.0)],
            };
        };
        if a > b && x <= first {
            let mut m = Vec::with_capacity(mono.len() + 1);
            m.push(x);
            m.extend_from_slice(mono);
            return vec![(m, 1.0)];
        }
        // X F rest = F (X rest) + [X, F] rest
        let mut terms = Vec::new();
        for (m, c) in self.act_monomial(k, x, rest) {
            for (m2, c2) in self.act_monomial(k, first, &m) {
                terms.push((m2, c * c2));
            }
        }
        for (y, c) in commutator(x, first) {
            for (m, c2) in self.act_monomial(k, y, rest) {
                terms.push((m, c * c2));
            }
        }
        collect(terms)
    }

    /// `E_{ab}` acting on factor `k` of a vector.
    pub fn act(&self, x: Unit, k: usize, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (key, &c) in &v.terms {
            for (m, c2) in self.act_monomial(k, x, &key[k]) {
                let mut nk = key.clone();
                nk[k] = m;
                out.add_term(nk, c * c2);
            }
        }
        out.prune();
        out
    }

    /// Dynkin labels of the weight of a monomial on factor `k`.
    pub fn monomial_weight(&self, k: usize, mono: &[Unit]) -> Vec<i64> {
        let mut w = self.weights[k].clone();
        for &(a, b) in mono {
            for (c, wc) in w.iter_mut().enumerate() {
                for e in b..a {
                    *wc -= match c.abs_diff(e) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    };
                }
            }
        }
        w
    }

    /// Highest-weight vector `|0>`.
    pub fn vacuum(&self) -> ModuleVector {
        ModuleVector::basis(vec![Vec::new(); self.num_factors()])
    }

    /// `Omega^{(ij)}` applied to one basis key.
    fn omega(&self, i: usize, j: usize, key: &BasisKey) -> Vec<(BasisKey, f64)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                for (mj, cj) in self.act_monomial(j, (b, a), &key[j]) {
                    for (mi, ci) in self.act_monomial(i, (a, b), &key[i]) {
                        let mut nk = key.clone();
                        nk[i] = mi.clone();
                        nk[j] = mj.clone();
                        out.push((nk, ci * cj));
                    }
                }
            }
        }
        let ginv = inverse_cartan(n);
        let hi = self.monomial_weight(i, &key[i]);
        let hj = self.monomial_weight(j, &key[j]);
        let mut cart = 0.0;
        for c in 0..n - 1 {
            for d in 0..n - 1 {
                cart += ginv[(c, d)] * hi[c] as f64 * hj[d] as f64;
            }
        }
        if cart != 0.0 {
            out.push((key.clone(), cart));
        }
        out
    }

    /// Casimir `1/2 sum J_a J^a` applied to `v_lambda` on factor `k`; returns
    /// the coefficient of `v_lambda` and the norm of everything else.
    pub fn casimir_on_highest(&self, k: usize) -> (f64, f64) {
        let n = self.n;
        let mut acc: BTreeMap<Monomial, f64> = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                for (m, c) in self.act_monomial(k, (b, a), &[]) {
                    for (m2, c2) in self.act_monomial(k, (a, b), &m) {
                        *acc.entry(m2).or_insert(0.0) += 0.5 * c * c2;
                    }
                }
            }
        }
        let ginv = inverse_cartan(n);
        let h = |c: usize| self.gl_weights[k][c] - self.gl_weights[k][c + 1];
        let mut cart = 0.0;
        for c in 0..n - 1 {
            for d in 0..n - 1 {
                cart += ginv[(c, d)] * h(c) * h(d);
            }
        }
        *acc.entry(Vec::new()).or_insert(0.0) += 0.5 * cart;
        let on_v = acc.remove(&Vec::new()).unwrap_or(0.0);
        let off = acc.values().map(|c| c * c).sum::<f64>().sqrt();
        (on_v, off)
    }
}

/// Sparse vector in a tensor product of Verma modules.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModuleVector {
    pub terms: BTreeMap<BasisKey, Complex64>,
}

impl ModuleVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: BasisKey) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(key, Complex64::new(1.0, 0.0));
        Self { terms }
    }

    pub fn add_term(&mut self, key: BasisKey, c: Complex64) {
        *self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() != 0.0);
    }

    pub fn coeff(&self, key: &BasisKey) -> Complex64 {
        self.terms.get(key).copied().unwrap_or_default()
    }

    pub fn norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, &c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, &c)| (k.clone(), c * s))
                .collect(),
        }
    }

    /// Coordinates on `basis`; keys outside the basis are an error.
    pub fn coordinates(&self, basis: &[BasisKey]) -> Result<DVector<Complex64>> {
        let index: HashMap<&BasisKey, usize> =
            basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut out = DVector::zeros(basis.len());
        for (k, &c) in &self.terms {
            let &i = index.get(k).ok_or_else(|| {
                Error::InvalidProblem(format!(
                    "vector has a component outside the weight space: {k:?}"
                ))
            })?;
            out[i] = c;
        }
        Ok(out)
    }
}

fn lowering_units(n: usize) -> Vec<Unit> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..a {
            out.push((a, b));
        }
    }
    out.sort();
    out
}

fn monomials_within(
    units: &[Unit],
    start: usize,
    budget: &mut Vec<usize>,
    cur: &mut Monomial,
    out: &mut Vec<(Monomial, Vec<usize>)>,
) {
    out.push((cur.clone(), budget.clone()));
    for (idx, &(a, b)) in units.iter().enumerate().skip(start) {
        if budget[b..a].iter().all(|&c| c > 0) {
            budget[b..a].iter_mut().for_each(|c| *c -= 1);
            cur.push((a, b));
            monomials_within(units, idx, budget, cur, out);
            cur.pop();
            budget[b..a].iter_mut().for_each(|c| *c += 1);
        }
    }
}

/// Basis of the weight space `sum lambda_k - sum_c beta_c alpha_c`, sorted.
pub fn weight_basis(
    n: usize,
    num_factors: usize,
    beta: &[usize],
    cutoff: usize,
) -> Result<Vec<BasisKey>> {
    if beta.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: beta.len(),
        });
    }
    let total: usize = beta.iter().sum();
    if total > cutoff {
        return Err(Error::CutoffExceeded { total, cutoff });
    }
    if num_factors == 0 {
        return Ok(if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        });
    }
    let units = lowering_units(n);
    let mut out = Vec::new();
    fn rec(
        units: &[Unit],
        k: usize,
        num_factors: usize,
        budget: &mut Vec<usize>,
        prefix: &mut BasisKey,
        out: &mut Vec<BasisKey>,
    ) {
        let mut choices = Vec::new();
        monomials_within(units, 0, budget, &mut Vec::new(), &mut choices);
        for (m, rest) in choices {
            if k + 1 == num_factors {
                if rest.iter().all(|&r| r == 0) {
                    let mut key = prefix.clone();
                    key.push(m);
                    out.push(key);
                }
            } else {
                let mut rest = rest;
                prefix.push(m);
                rec(units, k + 1, num_factors, &mut rest, prefix, out);
                prefix.pop();
            }
        }
    }
    rec(
        &units,
        0,
        num_factors,
        &mut beta.to_vec(),
        &mut Vec::new(),
        &mut out,
    );
    out.sort();
    Ok(out)
}

/// Operator on an enumerated weight-space basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    pub basis: Vec<BasisKey>,
    pub matrix: DMatrix<Complex64>,
}

impl LinearOperator {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn apply(&self, v: &ModuleVector) -> Result<ModuleVector> {
        let x = v.coordinates(&self.basis)?;
        let y = &self.matrix * x;
        let mut out = ModuleVector::zero();
        for (k, c) in self.basis.iter().zip(y.iter()) {
            if c.norm() != 0.0 {
                out.add_term(k.clone(), *c);
            }
        }
        Ok(out)
    }

    /// Frobenius norm of `[self, other]`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        (&self.matrix * &other.matrix - &other.matrix * &self.matrix).norm()
    }
}

/// `Xi_i = sum_{j != i} Omega^{(ij)} / (z_i - z_j)` on `basis`.
pub fn gaudin_hamiltonian(
    module: &TensorModule,
    z: &[Complex64],
    i: usize,
    basis: &[BasisKey],
    execution: Execution,
) -> Result<LinearOperator> {
    let nf = module.num_factors();
    if z.len() != nf {
        return Err(Error::DimensionMismatch {
            expected: nf,
            found: z.len(),
        });
    }
    if i >= nf {
        return Err(Error::IndexOutOfRange { index: i, rank: nf });
    }
    for j in 0..nf {
        if j != i && z[i] == z[j] {
            return Err(Error::Collision {
                first: format!("z{}", i + 1),
                second: format!("z{}", j + 1),
                distance: 0.0,
            });
        }
    }
    let index: HashMap<&BasisKey, usize> = basis.iter().enumerate().map(|(r, k)| (k, r)).collect();
    let columns = execution.map(basis, |key| {
        let mut col = vec![Complex64::new(0.0, 0.0); basis.len()];
        for j in (0..nf).filter(|&j| j != i) {
            let w = Complex64::new(1.0, 0.0) / (z[i] - z[j]);
            for (k, c) in module.omega(i, j, key) {
                let r = *index
                    .get(&k)
                    .expect("Gaudin hamiltonians preserve weight spaces");
                col[r] += w * c;
            }
        }
        col
    });
    let d = basis.len();
    let matrix = DMatrix::from_fn(d, d, |r, c| columns[c][r]);
    Ok(LinearOperator {
        basis: basis.to_vec(),
        matrix,
    })
}

/// `theta = <v, A v> / <v, v>` and `||A v - theta v|| / ||v||`.
pub fn eigencheck(op: &LinearOperator, v: &ModuleVector) -> Result<(Complex64, f64)> {
    let x = v.coordinates(&op.basis)?;
    let nv = x.norm();
    if nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    let y = &op.matrix * &x;
    let theta = x.dotc(&y) / (nv * nv);
    let r = (y - x.map(|c| c * theta)).norm() / nv;
    Ok((theta, r))
}

fn compositions(m: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for mut rest in compositions(m - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k.is_multiple_of(2) {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(m, &mut cur, &mut out);
    out
}

/// `F_{c_1} .. F_{c_a} v_lambda` on factor `k`, rightmost applied first.
fn lowered(module: &TensorModule, k: usize, colors: &[usize]) -> Combo {
    let mut cur: Combo = vec![(Vec::new(), 1.0)];
    for &c in colors.iter().rev() {
        let mut terms = Vec::new();
        for (m, x) in cur {
            for (m2, y) in module.act_monomial(k, (c + 1, c), &m) {
                terms.push((m2, x * y));
            }
        }
        cur = collect(terms);
    }
    cur
}

/// Bethe vector: the sum over ordered partitions of the roots among the
/// sites, each block weighted by `1/((w_1 - w_2) .. (w_a - z_k))`.
pub fn bethe_vector(
    module: &TensorModule,
    z: &[Complex64],
    colors: &[usize],
    roots: &[Complex64],
) -> Result<ModuleVector> {
    let nf = module.num_factors();
    if z.len() != nf || colors.len() != roots.len() {
        return Err(Error::DimensionMismatch {
            expected: nf,
            found: z.len(),
        });
    }
    let guard = 1e-12;
    for (j, &w) in roots.iter().enumerate() {
        for (k, &zk) in z.iter().enumerate() {
            if (w - zk).norm() <= guard {
                return Err(Error::Collision {
                    first: format!("w{}", j + 1),
                    second: format!("z{}", k + 1),
                    distance: (w - zk).norm(),
                });
            }
        }
        for (l, &v) in roots.iter().enumerate().skip(j + 1) {
            if (w - v).norm() <= guard {
                return Err(Error::Collision {
                    first: format!("w{}", j + 1),
                    second: format!("w{}", l + 1),
                    distance: (w - v).norm(),
                });
            }
        }
    }
    let m = roots.len();
    if nf == 0 {
        return Ok(if m == 0 {
            ModuleVector::basis(Vec::new())
        } else {
            ModuleVector::zero()
        });
    }
    let mut memo: HashMap<(usize, Vec<usize>), Combo> = HashMap::new();
    let mut out = ModuleVector::zero();
    let comps = compositions(m, nf);
    for perm in permutations(m) {
        for comp in &comps {
            let mut key_parts: Vec<Combo> = Vec::with_capacity(nf);
            let mut weight = Complex64::new(1.0, 0.0);
            let mut pos = 0;
            for (k, &len) in comp.iter().enumerate() {
                let block = &perm[pos..pos + len];
                pos += len;
                for t in 0..len {
                    let next = if t + 1 < len {
                        roots[block[t + 1]]
                    } else {
                        z[k]
                    };
                    weight /= roots[block[t]] - next;
                }
                let cs: Vec<usize> = block.iter().map(|&r| colors[r]).collect();
                let combo = memo
                    .entry((k, cs.clone()))
                    .or_insert_with(|| lowered(module, k, &cs))
                    .clone();
                key_parts.push(combo);
            }
            let mut partial: Vec<(BasisKey, f64)> = vec![(Vec::new(), 1.0)];
            for combo in &key_parts {
                let mut next = Vec::with_capacity(partial.len() * combo.len());
                for (key, x) in &partial {
                    for (mono, y) in combo {
                        let mut k2 = key.clone();
                        k2.push(mono.clone());
                        next.push((k2, x * y));
                    }
                }
                partial = next;
            }
            for (key, c) in partial {
                out.add_term(key, weight * c);
            }
        }
    }
    out.prune();
    Ok(out)
}

/// Norm of `sum_k E_{a,a+1}^{(k)} v`, maximized over `a`.
pub fn highest_weight_defect(module: &TensorModule, v: &ModuleVector) -> f64 {
    (0..module.n - 1)
        .map(|a| {
            (0..module.num_factors())
                .fold(ModuleVector::zero(), |acc, k| {
                    acc.add(&module.act((a, a + 1), k, v))
                })
                .norm()
        })
        .fold(0.0, f64::max)
}

/// `Psi(u) = sum theta_i/(u - z_i) + sum Delta_i/(u - z_i)^2`.
pub fn eigenvalue_function(z: &[Complex64], thetas: &[Complex64], deltas: &[f64]) -> RatFun {
    z.iter()
        .zip(thetas)
        .zip(deltas)
        .fold(RatFun::zero(), |acc, ((&zi, &t), &d)| {
            let s =
                &RatFun::pole_term(zi, 1, t) + &RatFun::pole_term(zi, 2, Complex64::new(d, 0.0));
            &acc + &s
        })
}

/// Comparison of the eigenvalue generating function with `v_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperMatch {
    pub psi: RatFun,
    pub v1: RatFun,
    pub kappa: f64,
    pub samples: Vec<Complex64>,
    /// `max |Psi(u) - kappa v_1(u)|` over `samples`.
    pub max_deviation: f64,
}

fn match_samples(z: &[Complex64]) -> Vec<Complex64> {
    let n = z.len().max(1) as f64;
    let c = z.iter().sum::<Complex64>() / n;
    let r = 1.0 + z.iter().map(|x| (x - c).norm()).fold(0.0, f64::max);
    (0..10)
        .map(|k| c + Complex64::from_polar(r * (1.2 + 0.09 * k as f64), 0.3 + 0.63 * k as f64))
        .collect()
}

/// `kappa` from a single site of weight `omega_1` with no roots.
pub fn calibrate_kappa(n: usize) -> Result<f64> {
    let a = crate::rootdata::GeneralizedCartanMatrix::parse(&format!("A{}", n - 1))?;
    let mut p = vec![0i64; n - 1];
    p[0] = 1;
    let site = crate::bethe::Site::new(
        Complex64::new(0.0, 0.0),
        crate::rootdata::Coweight::from_integers(&p),
    );
    let problem = BetheProblem::new(a, vec![site], Vec::new())?;
    let conn = connection_from_solution(&problem, &BetheSolution::empty());
    let v1 = miura_scalar_oper(&conn, 1e-9)?.v[0].clone();
    let psi = eigenvalue_function(
        &[Complex64::new(0.0, 0.0)],
        &[Complex64::new(0.0, 0.0)],
        &[casimir_scalar(n, &p)],
    );
    let u = Complex64::new(1.0, 0.0);
    Ok((psi.eval(u) / v1.eval(u)).re)
}

/// Evaluates `Psi` against `kappa v_1` of the Miura oper of `solution`.
pub fn eigenvalue_vs_oper(
    problem: &BetheProblem,
    solution: &BetheSolution,
    thetas: &[Complex64],
    deltas: &[f64],
    kappa: f64,
) -> Result<OperMatch> {
    let conn = connection_from_solution(problem, solution);
    let v1 = miura_scalar_oper(&conn, 1e-8)?.v[0].clone();
    let z: Vec<Complex64> = problem.sites().iter().map(|s| s.z).collect();
    let psi = eigenvalue_function(&z, thetas, deltas);
    let samples = match_samples(&z);
    let max_deviation = samples
        .iter()
        .map(|&u| (psi.eval(u) - v1.eval(u) * kappa).norm())
        .fold(0.0, f64::max);
    Ok(OperMatch {
        psi,
        v1,
        kappa,
        samples,
        max_deviation,
    })
}

/// Full eigenvector verification of a Bethe vector.
#[derive(Debug, Clone, PartialEq)]
pub struct GaudinReport {
    pub dimension: usize,
    pub beta: Vec<usize>,
    pub vector_norm: f64,
    pub eigenvalues: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub casimirs: Vec<f64>,
    pub max_commutator: f64,
    pub sum_norm: f64,
    pub highest_weight_defect: f64,
    pub oper: Option<OperMatch>,
}

/// Builds all hamiltonians on the weight space of `solution`, checks the
/// Bethe vector against each, and compares with the Miura oper.
pub fn gaudin_check(
    problem: &BetheProblem,
    solution: &BetheSolution,
    cutoff: usize,
    max_dim: usize,
    execution: Execution,
) -> Result<GaudinReport> {
    let module = TensorModule::from_problem(problem)?;
    let n = module.n();
    let beta = problem.color_counts();
    let basis = weight_basis(n, module.num_factors(), &beta, cutoff)?;
    if basis.len() > max_dim {
        return Err(Error::CutoffExceeded {
            total: basis.len(),
            cutoff: max_dim,
        });
    }
    let z: Vec<Complex64> = problem.sites().iter().map(|s| s.z).collect();
    let ops = (0..z.len())
        .map(|i| gaudin_hamiltonian(&module, &z, i, &basis, execution))
        .collect::<Result<Vec<_>>>()?;
    let v = bethe_vector(&module, &z, problem.colors(), &solution.roots)?;
    let mut eigenvalues = Vec::new();
    let mut residuals = Vec::new();
    for op in &ops {
        let (t, r) = eigencheck(op, &v)?;
        eigenvalues.push(t);
        residuals.push(r);
    }
    let mut max_commutator: f64 = 0.0;
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            max_commutator = max_commutator.max(ops[i].commutator_norm(&ops[j]));
        }
    }
    let d = basis.len();
    let sum_norm = ops
        .iter()
        .fold(DMatrix::<Complex64>::zeros(d, d), |acc, op| {
            acc + &op.matrix
        })
        .norm();
    let casimirs: Vec<f64> = module
        .weights()
        .iter()
        .map(|p| casimir_scalar(n, p))
        .collect();
    let kappa = if n == 2 {
        KAPPA_SL2
    } else {
        calibrate_kappa(n)?
    };
    let oper = eigenvalue_vs_oper(problem, solution, &eigenvalues, &casimirs, kappa).ok();
    Ok(GaudinReport {
        dimension: d,
        beta,
        vector_norm: v.norm(),
        highest_weight_defect: highest_weight_defect(&module, &v),
        eigenvalues,
        residuals,
        casimirs,
        max_commutator,
        sum_norm,
        oper,
    })
}
