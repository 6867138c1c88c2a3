//! `sl_n` matrix opers, their canonical (companion) form, and coordinate
//! changes of opers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::miura::ScalarOper;
use crate::ratfun::{LocalJet, RatFun};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const SHAPE_TOL: f64 = 1e-12;

/// Square matrix of rational functions.
pub type RatMatrix = Vec<Vec<RatFun>>;

fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        RatFun::constant(ONE)
                    } else {
                        RatFun::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(RatFun::zero(), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&a[i][k] * &b[k][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

fn mat_sub(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

fn mat_derivative(a: &RatMatrix) -> RatMatrix {
    a.iter()
        .map(|r| r.iter().map(|x| x.derivative()).collect())
        .collect()
}

fn mat_normalized(a: &RatMatrix) -> RatMatrix {
    a.iter()
        .map(|r| r.iter().map(|x| x.normalized(SHAPE_TOL)).collect())
        .collect()
}

/// Evaluates a matrix at a point.
pub fn eval_matrix(a: &RatMatrix, t: Complex64) -> Vec<Vec<Complex64>> {
    a.iter()
        .map(|r| r.iter().map(|x| x.eval(t)).collect())
        .collect()
}

/// Inverse of a unipotent upper-triangular matrix by back-substitution.
pub fn unipotent_inverse(g: &RatMatrix) -> Result<RatMatrix> {
    let n = g.len();
    check_unipotent(g)?;
    let mut inv = identity(n);
    // Column by column: g * inv[:, j] = e_j, solved from the bottom row up.
    for j in 0..n {
        for i in (0..j).rev() {
            let mut s = RatFun::zero();
            for k in i + 1..=j {
                if !g[i][k].is_zero() && !inv[k][j].is_zero() {
                    s = &s + &(&g[i][k] * &inv[k][j]);
                }
            }
            inv[i][j] = -&s;
        }
    }
    Ok(inv)
}

fn is_const(f: &RatFun, c: Complex64) -> bool {
    (f - &RatFun::constant(c)).normalized(SHAPE_TOL).is_zero()
}

fn check_unipotent(g: &RatMatrix) -> Result<()> {
    let n = g.len();
    for (i, row) in g.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        for (j, x) in row.iter().enumerate() {
            let ok = match i.cmp(&j) {
                std::cmp::Ordering::Equal => is_const(x, ONE),
                std::cmp::Ordering::Greater => x.normalized(SHAPE_TOL).is_zero(),
                std::cmp::Ordering::Less => true,
            };
            if !ok {
                return Err(Error::OperShape { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// `d/dt + M(t)` with `-1` on the subdiagonal and zeros below it.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOper {
    entries: RatMatrix,
}

impl MatrixOper {
    pub fn new(entries: RatMatrix) -> Result<Self> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, x) in row.iter().enumerate() {
                let ok = if i == j + 1 {
                    is_const(x, -ONE)
                } else if i > j + 1 {
                    x.normalized(SHAPE_TOL).is_zero()
                } else {
                    true
                };
                if !ok {
                    return Err(Error::OperShape { row: i, col: j });
                }
            }
        }
        Ok(Self { entries })
    }

    /// `p_{-1} + diag(u_1, .., u_n)`.
    pub fn from_diagonal(u: &[RatFun]) -> Self {
        let n = u.len();
        let mut m = vec![vec![RatFun::zero(); n]; n];
        for (i, ui) in u.iter().enumerate() {
            m[i][i] = ui.clone();
            if i + 1 < n {
                m[i + 1][i] = RatFun::constant(-ONE);
            }
        }
        Self { entries: m }
    }

    /// `p_{-1}` plus first row `(0, v_1, .., v_{n-1})`.
    pub fn companion(v: &CanonicalOper) -> Self {
        let n = v.v.len() + 1;
        let mut m = vec![vec![RatFun::zero(); n]; n];
        for i in 0..n - 1 {
            m[i + 1][i] = RatFun::constant(-ONE);
        }
        for (k, vk) in v.v.iter().enumerate() {
            m[0][k + 1] = vk.clone();
        }
        Self { entries: m }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn eval(&self, t: Complex64) -> Vec<Vec<Complex64>> {
        eval_matrix(&self.entries, t)
    }
}

/// Companion-form coefficients `v_1..v_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalOper {
    pub v: Vec<RatFun>,
}

impl From<&ScalarOper> for CanonicalOper {
    fn from(s: &ScalarOper) -> Self {
        Self { v: s.v.clone() }
    }
}

/// `g M g^{-1} - g' g^{-1}` for unipotent upper-triangular `g`.
pub fn gauge_transform(oper: &MatrixOper, g: &RatMatrix) -> Result<MatrixOper> {
    let n = oper.n();
    if g.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.len(),
        });
    }
    let inv = unipotent_inverse(g)?;
    let conj = mat_mul(&mat_mul(g, &oper.entries), &inv);
    let drift = mat_mul(&mat_derivative(g), &inv);
    MatrixOper::new(mat_normalized(&mat_sub(&conj, &drift)))
}

/// Reduction to companion form. Returns the coefficients and the unipotent
/// gauge `g` with `gauge_transform(oper, g)` equal to the companion form.
pub fn canonical_form_with_gauge(oper: &MatrixOper) -> Result<(CanonicalOper, RatMatrix)> {
    let n = oper.n();
    let trace = (0..n).fold(RatFun::zero(), |acc, i| &acc + &oper.entries[i][i]);
    let trace = trace.normalized(1e-10);
    if !trace.is_zero() {
        let magnitude = trace.polynomial_part().max_abs().max(
            trace
                .pole_parts()
                .iter()
                .flat_map(|p| p.coeffs.iter())
                .map(|c| c.norm())
                .fold(0.0, f64::max),
        );
        return Err(Error::NotTraceless { magnitude });
    }
    let mut cur = oper.clone();
    let mut total = identity(n);
    for k in 0..n.saturating_sub(1) {
        // Diagonal k holds b_a = M[a][a+k], a = 0..n-k-1 (zero-based). A gauge
        // by 1 + X, X on diagonal k+1, changes b_a to b_a - x_a + x_{a-1}.
        let len = n - k;
        let b: Vec<RatFun> = (0..len).map(|a| cur.entries[a][a + k].clone()).collect();
        let mut x = vec![RatFun::zero(); len - 1];
        x[len - 2] = -&b[len - 1];
        for a in (1..len - 1).rev() {
            x[a - 1] = &x[a] - &b[a];
        }
        if x.iter().all(|xi| xi.is_zero()) {
            continue;
        }
        let mut g = identity(n);
        for (a, xa) in x.into_iter().enumerate() {
            g[a][a + k + 1] = xa;
        }
        cur = gauge_transform(&cur, &g)?;
        total = mat_normalized(&mat_mul(&g, &total));
    }
    let v = (1..n).map(|k| cur.entries[0][k].clone()).collect();
    Ok((CanonicalOper { v }, total))
}

pub fn canonical_form(oper: &MatrixOper) -> Result<CanonicalOper> {
    canonical_form_with_gauge(oper).map(|(v, _)| v)
}

fn nonzero_derivative(phi: &LocalJet) -> Result<LocalJet> {
    let d = phi.derivative();
    let d0 = d.coeff(0);
    if d.lowest_order() != 0 || d0.norm() < 1e-14 {
        return Err(Error::CriticalPoint {
            derivative: d0.norm(),
        });
    }
    Ok(d)
}

/// `{phi, s} = phi'''/phi' - 3/2 (phi''/phi')^2` as a jet.
pub fn schwarzian(phi: &LocalJet, order: i32) -> Result<LocalJet> {
    let d1 = nonzero_derivative(phi)?;
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let inv = d1.recip().ok_or(Error::CriticalPoint { derivative: 0.0 })?;
    let a = &d3 * &inv;
    let b = &d2 * &inv;
    let s = &a - &(&b * &b).scale(Complex64::new(1.5, 0.0));
    Ok(s.truncate(order))
}

/// Transformed coefficient jets under `t = phi(s)`:
/// `v_1 -> v_1(phi) phi'^2 - {phi, s}/2` and `v_j -> v_j(phi) phi'^(j+1)`.
pub fn oper_coordinate_change(
    v: &CanonicalOper,
    phi: &LocalJet,
    order: i32,
) -> Result<Vec<LocalJet>> {
    let d1 = nonzero_derivative(phi)?;
    let base = phi.coeff(0);
    let schw = schwarzian(phi, order)?;
    v.v.iter()
        .enumerate()
        .map(|(idx, vj)| {
            let j = idx as i32 + 1;
            let outer = vj.local_jet(base, order + j + 3);
            let pulled = outer.compose(phi).ok_or(Error::CriticalPoint {
                derivative: d1.coeff(0).norm(),
            })?;
            let factor = d1.powi(j + 1).expect("positive power");
            let mut out = &pulled * &factor;
            if j == 1 {
                out = &out - &schw.scale(Complex64::new(0.5, 0.0));
            }
            Ok(out.truncate(order))
        })
        .collect()
}

/// Leading data `c_j = [t^{j+1} v_j](point)`: the coefficient of
/// `(t - point)^{-(j+1)}` in `v_j`.
pub fn leading_data(v: &CanonicalOper, point: Complex64) -> Vec<Complex64> {
    v.v.iter()
        .enumerate()
        .map(|(idx, vj)| {
            let k = -(idx as i32 + 2);
            vj.local_jet(point, k).coeff(k)
        })
        .collect()
}

/// `(c_1 + 1/4, c_2, .., c_l)`.
pub fn rs_residue(c: &[Complex64]) -> Vec<Complex64> {
    c.iter()
        .enumerate()
        .map(|(j, &x)| if j == 0 { x + 0.25 } else { x })
        .collect()
}
