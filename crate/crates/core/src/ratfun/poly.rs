use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense polynomial with complex coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![ZERO, ONE])
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| {
            let mut out = vec![ZERO; acc.coeffs.len() + 1];
            for (k, &c) in acc.coeffs.iter().enumerate() {
                out[k + 1] += c;
                out[k] -= c * r;
            }
            Self::new(out)
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(ZERO);
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k as f64 + 1.0)),
        );
        Self::new(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(&l) => self.scale(ONE / l),
        }
    }

    /// Drops trailing coefficients whose magnitude is below `tol` times the
    /// largest coefficient.
    pub fn trimmed(&self, tol: f64) -> Self {
        let scale = self.max_abs();
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| x.norm() <= tol * scale) {
            c.pop();
        }
        Self::new(c)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Taylor coefficients at `center`: `p(x) = sum_k out[k] (x - center)^k`.
    pub fn taylor_at(&self, center: Complex64) -> Vec<Complex64> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let hi = c[k + 1];
                c[k] += center * hi;
            }
        }
        c
    }

    /// Inverse of [`Poly::taylor_at`].
    pub fn from_taylor(center: Complex64, shifted: &[Complex64]) -> Self {
        shifted.iter().rev().fold(Self::zero(), |acc, &c| {
            &(&acc * &Self::new(vec![-center, ONE])) + &Self::constant(c)
        })
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut q = vec![ZERO; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd] / lead;
            q[k] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= c * dc;
            }
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }

    /// Roots with multiplicities. Eigenvalues of the companion matrix are
    /// polished by Newton steps; eigenvalues closer than the merge radius
    /// `sqrt(tol) * (1 + |r|)` are merged into a single multiple root located
    /// at the cluster mean.
    pub fn roots(&self, tol: f64) -> Result<Vec<(Complex64, usize)>> {
        let Some(deg) = self.degree() else {
            return Err(Error::RootFinding(
                "zero polynomial has no isolated roots".into(),
            ));
        };
        if deg == 0 {
            return Ok(Vec::new());
        }
        let lead = self.leading();
        // Zero roots are peeled off exactly.
        let zeros = self.coeffs.iter().take_while(|c| **c == ZERO).count();
        let reduced: Vec<Complex64> = self.coeffs[zeros..].iter().map(|c| c / lead).collect();
        let n = reduced.len() - 1;
        let mut raw: Vec<Complex64> = vec![ZERO; zeros];
        if n > 0 {
            let mut m = DMatrix::<Complex64>::zeros(n, n);
            for k in 0..n {
                m[(0, k)] = -reduced[n - 1 - k];
            }
            for k in 1..n {
                m[(k, k - 1)] = ONE;
            }
            let eig = Schur::try_new(m, f64::EPSILON, 10_000)
                .and_then(|s| s.eigenvalues())
                .ok_or_else(|| {
                    Error::RootFinding(format!("companion Schur decomposition failed (degree {n})"))
                })?;
            let q = Poly::new(reduced.clone());
            let dq = q.derivative();
            for &r0 in eig.iter() {
                raw.push(polish(&q, &dq, r0));
            }
        }
        if raw.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
            return Err(Error::RootFinding("non-finite eigenvalue".into()));
        }
        let q = self.monic();
        let mut out = cluster(raw, tol.sqrt());
        for (r, k) in out.iter_mut() {
            if *k > 1 && *r != ZERO {
                // A root of multiplicity k is simple for the (k-1)-th derivative.
                let mut d = q.clone();
                for _ in 1..*k {
                    d = d.derivative();
                }
                *r = polish(&d, &d.derivative(), *r);
            }
        }
        Ok(out)
    }
}

fn polish(p: &Poly, dp: &Poly, mut r: Complex64) -> Complex64 {
    let mut best = p.eval(r).norm();
    for _ in 0..8 {
        let d = dp.eval(r);
        if d.norm() == 0.0 {
            break;
        }
        let next = r - p.eval(r) / d;
        let val = p.eval(next).norm();
        if val < best {
            best = val;
            r = next;
        } else {
            break;
        }
    }
    r
}

fn cluster(mut raw: Vec<Complex64>, radius: f64) -> Vec<(Complex64, usize)> {
    raw.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    'outer: for r in raw {
        for g in groups.iter_mut() {
            let c = g.iter().sum::<Complex64>() / g.len() as f64;
            if (c - r).norm() <= radius * (1.0 + c.norm()) {
                g.push(r);
                continue 'outer;
            }
        }
        groups.push(vec![r]);
    }
    groups
        .into_iter()
        .map(|g| (g.iter().sum::<Complex64>() / g.len() as f64, g.len()))
        .collect()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-ONE)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn taylor_round_trip() {
        let p = Poly::from_real(&[1.0, -2.0, 0.5, 3.0]);
        let at = Complex64::new(0.3, -1.2);
        let t = p.taylor_at(at);
        let back = Poly::from_taylor(at, &t);
        for k in 0..4 {
            assert!((back.coeff(k) - p.coeff(k)).norm() < 1e-12);
        }
        let x = Complex64::new(1.1, 0.4);
        let direct = p.eval(x);
        let shifted: Complex64 = t
            .iter()
            .enumerate()
            .map(|(k, &a)| a * (x - at).powi(k as i32))
            .sum();
        assert!((direct - shifted).norm() < 1e-12);
    }

    #[test]
    fn div_rem_exact() {
        let num = Poly::from_roots(&[c(1.0), c(-1.0), c(2.0)]);
        let den = Poly::from_roots(&[c(1.0)]);
        let (q, r) = num.div_rem(&den);
        assert!(r.max_abs() < 1e-14);
        let expect = Poly::from_roots(&[c(-1.0), c(2.0)]);
        assert!((&q - &expect).max_abs() < 1e-14);
    }

    #[test]
    fn roots_with_multiplicity() {
        let p = Poly::from_roots(&[c(1.0), c(1.0), c(-2.0), Complex64::new(0.0, 1.0)]);
        let mut r = p.roots(1e-9).unwrap();
        r.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
        assert_eq!(r.len(), 3);
        assert!((r[0].0 - c(-2.0)).norm() < 1e-10 && r[0].1 == 1);
        assert!((r[1].0 - Complex64::new(0.0, 1.0)).norm() < 1e-10);
        assert!((r[2].0 - c(1.0)).norm() < 1e-9 && r[2].1 == 2, "{r:?}");
        let zero_roots = Poly::from_roots(&[c(0.0), c(0.0), c(3.0)])
            .roots(1e-9)
            .unwrap();
        assert_eq!(zero_roots.iter().map(|r| r.1).sum::<usize>(), 3);
    }

    #[test]
    fn integral_and_derivative() {
        let p = Poly::from_real(&[0.0, 2.0]);
        assert_eq!(p.integral(), Poly::from_real(&[0.0, 0.0, 1.0]));
        assert_eq!(p.integral().derivative(), p);
    }
}
