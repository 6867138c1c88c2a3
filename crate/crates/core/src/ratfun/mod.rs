//! Polynomials, rational functions and truncated Laurent jets over `C`.
//!
//! A [`RatFun`] is stored in partial-fraction form: a polynomial part plus a
//! principal part at each pole. Numerator and denominator are available on
//! demand, and [`RatFun::from_polys`] converts the other way by root finding.

mod jet;
mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub use jet::LocalJet;
pub use poly::Poly;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default tolerance for evaluation-based checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Two poles closer than this (relative) are the same point.
const MERGE_EPS: f64 = 1e-12;

fn same_point(p: Complex64, q: Complex64) -> bool {
    (p - q).norm() <= MERGE_EPS * (1.0 + p.norm())
}

/// Principal part `sum_k coeffs[k-1] / (t - pole)^k` at one pole.
#[derive(Debug, Clone, PartialEq)]
pub struct PolePart {
    pub pole: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl PolePart {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    fn eval(&self, t: Complex64) -> Complex64 {
        let inv = ONE / (t - self.pole);
        let mut pow = inv;
        let mut acc = ZERO;
        for &c in &self.coeffs {
            acc += c * pow;
            pow *= inv;
        }
        acc
    }

    fn trim(&mut self, tol: f64) {
        while self.coeffs.last().is_some_and(|c| c.norm() <= tol) {
            self.coeffs.pop();
        }
    }

    /// Taylor coefficients of this principal part at a different point `r`,
    /// from order 0 through `order`.
    fn taylor_at(&self, r: Complex64, order: usize) -> Vec<Complex64> {
        let d = r - self.pole;
        let mut out = vec![ZERO; order + 1];
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let k = idx as i32 + 1;
            // c (d + s)^{-k} = c d^{-k} sum_n binom(-k, n) (s/d)^n
            let mut term = c * d.powi(-k);
            for (n, slot) in out.iter_mut().enumerate() {
                *slot += term;
                term *= -((k + n as i32) as f64) / ((n + 1) as f64) / d;
            }
        }
        out
    }
}

/// Rational function in partial-fraction form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RatFun {
    poly: Poly,
    poles: Vec<PolePart>,
}

/// Output of [`RatFun::partial_fractions`].
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions {
    pub polynomial: Poly,
    /// `(pole, order, coefficient)` for each nonzero term.
    pub terms: Vec<(Complex64, usize, Complex64)>,
}

/// Output of [`RatFun::hermite_integrate`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteIntegral {
    pub rational_part: RatFun,
    /// Simple-pole coefficients left over, i.e. the logarithmic terms.
    pub residues: Vec<(Complex64, Complex64)>,
    /// Antiderivative of the polynomial part, with zero constant term.
    pub polynomial_part: Poly,
}

impl HermiteIntegral {
    /// `rational_part + polynomial_part`, the rational antiderivative when
    /// there are no residues.
    pub fn antiderivative(&self) -> RatFun {
        &self.rational_part + &RatFun::from_poly(self.polynomial_part.clone())
    }

    pub fn is_log_free(&self) -> bool {
        self.residues.is_empty()
    }
}

impl RatFun {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_poly(poly: Poly) -> Self {
        Self {
            poly,
            poles: Vec::new(),
        }
    }

    /// `c / (t - pole)^order`.
    pub fn pole_term(pole: Complex64, order: usize, c: Complex64) -> Self {
        if order == 0 {
            return Self::constant(c);
        }
        let mut coeffs = vec![ZERO; order];
        coeffs[order - 1] = c;
        Self::from_parts(Poly::zero(), vec![PolePart { pole, coeffs }])
    }

    /// Builds from a polynomial part and principal parts; coincident poles
    /// are merged and zero top coefficients dropped.
    pub fn from_parts(poly: Poly, parts: Vec<PolePart>) -> Self {
        let mut poles: Vec<PolePart> = Vec::new();
        for part in parts {
            match poles.iter_mut().find(|q| same_point(q.pole, part.pole)) {
                Some(q) => {
                    if q.coeffs.len() < part.coeffs.len() {
                        q.coeffs.resize(part.coeffs.len(), ZERO);
                    }
                    for (a, b) in q.coeffs.iter_mut().zip(&part.coeffs) {
                        *a += b;
                    }
                }
                None => poles.push(part),
            }
        }
        for p in poles.iter_mut() {
            p.trim(0.0);
        }
        poles.retain(|p| !p.coeffs.is_empty());
        Self { poly, poles }
    }

    /// `num / den`, with the denominator factored by root finding. Roots of
    /// `den` where the Laurent coefficients of the quotient vanish to `tol`
    /// (common roots) disappear from the result.
    pub fn from_polys(num: &Poly, den: &Poly, tol: f64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::RootFinding("zero denominator".into()));
        }
        let (q, r) = num.div_rem(den);
        if r.is_zero() {
            return Ok(Self::from_poly(q));
        }
        let roots = den.roots(tol)?;
        check_separation(roots.iter().map(|r| r.0), tol)?;
        Self::from_factored(num, den.leading(), &roots, tol)
    }

    /// `num / (lead * prod (t - root)^mult)` with the denominator given in
    /// factored form.
    pub fn from_factored(
        num: &Poly,
        lead: Complex64,
        roots: &[(Complex64, usize)],
        tol: f64,
    ) -> Result<Self> {
        if lead == ZERO {
            return Err(Error::RootFinding("zero denominator".into()));
        }
        let expanded: Vec<Complex64> = roots
            .iter()
            .flat_map(|&(r, m)| std::iter::repeat_n(r, m))
            .collect();
        let den = Poly::from_roots(&expanded).scale(lead);
        let (q, r) = num.div_rem(&den);
        if r.is_zero() {
            return Ok(Self::from_poly(q));
        }
        let mut parts = Vec::with_capacity(roots.len());
        for (idx, &(root, mult)) in roots.iter().enumerate() {
            let k = mult as i32;
            // den = lead (t-root)^k prod_other, jet of prod_other at root.
            let mut rest = LocalJet::constant(root, lead, k);
            for (jdx, &(other, m)) in roots.iter().enumerate() {
                if jdx == idx {
                    continue;
                }
                let factor =
                    &LocalJet::constant(root, root - other, k) + &LocalJet::coordinate(root, k);
                for _ in 0..m {
                    rest = &rest * &factor;
                }
            }
            let num_jet = LocalJet::new(root, 0, r.taylor_at(root), k - 1);
            let local = num_jet
                .checked_div(&rest)
                .ok_or_else(|| Error::RootFinding("vanishing cofactor".into()))?;
            // local is (t-root)^k * f; its coefficients 0..k-1 are the
            // principal coefficients of orders k..1.
            let coeffs: Vec<Complex64> = (0..k).rev().map(|j| local.coeff(j)).collect();
            parts.push(PolePart { pole: root, coeffs });
        }
        let scale = parts
            .iter()
            .flat_map(|p| p.coeffs.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        for p in parts.iter_mut() {
            p.trim(tol * (1.0 + scale));
        }
        Ok(Self::from_parts(q, parts))
    }

    pub fn polynomial_part(&self) -> &Poly {
        &self.poly
    }

    pub fn pole_parts(&self) -> &[PolePart] {
        &self.poles
    }

    pub fn poles(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.poles.iter().map(|p| p.pole)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.poles.is_empty()
    }

    /// Order of the pole at `t` (0 if regular).
    pub fn pole_order_at(&self, t: Complex64) -> usize {
        self.poles
            .iter()
            .find(|p| same_point(p.pole, t))
            .map_or(0, |p| p.order())
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.poly.eval(t) + self.poles.iter().map(|p| p.eval(t)).sum::<Complex64>()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == ZERO {
            return Self::zero();
        }
        Self {
            poly: self.poly.scale(s),
            poles: self
                .poles
                .iter()
                .map(|p| PolePart {
                    pole: p.pole,
                    coeffs: p.coeffs.iter().map(|c| c * s).collect(),
                })
                .collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        let poles = self
            .poles
            .iter()
            .map(|p| {
                let mut coeffs = vec![ZERO; p.coeffs.len() + 1];
                for (idx, &c) in p.coeffs.iter().enumerate() {
                    let k = idx as f64 + 1.0;
                    coeffs[idx + 1] = -k * c;
                }
                PolePart {
                    pole: p.pole,
                    coeffs,
                }
            })
            .collect();
        Self::from_parts(self.poly.derivative(), poles)
    }

    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(ONE), |acc, _| &acc * self)
    }

    /// Monic denominator `prod (t - p)^{order}`.
    pub fn denominator(&self) -> Poly {
        let roots: Vec<Complex64> = self
            .poles
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.pole, p.order()))
            .collect();
        Poly::from_roots(&roots)
    }

    /// Numerator matching [`RatFun::denominator`].
    pub fn numerator(&self) -> Poly {
        let den = self.denominator();
        let mut num = &self.poly * &den;
        for (idx, p) in self.poles.iter().enumerate() {
            let others: Vec<Complex64> = self
                .poles
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != idx)
                .flat_map(|(_, q)| std::iter::repeat_n(q.pole, q.order()))
                .collect();
            let cofactor = Poly::from_roots(&others);
            let kp = p.order();
            for (kidx, &c) in p.coeffs.iter().enumerate() {
                let k = kidx + 1;
                let extra = Poly::from_roots(&vec![p.pole; kp - k]);
                num = &num + &(&extra * &cofactor).scale(c);
            }
        }
        num
    }

    /// Drops principal coefficients below `tol` (relative to the largest)
    /// and trailing polynomial coefficients below `tol`.
    pub fn normalized(&self, tol: f64) -> Self {
        let scale = self
            .poles
            .iter()
            .flat_map(|p| p.coeffs.iter())
            .chain(self.poly.coeffs().iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let cut = tol * scale.max(1.0);
        let mut poles = self.poles.clone();
        for p in poles.iter_mut() {
            p.trim(cut);
        }
        poles.retain(|p| !p.coeffs.is_empty());
        let mut pc = self.poly.coeffs().to_vec();
        while pc.last().is_some_and(|c| c.norm() <= cut) {
            pc.pop();
        }
        Self {
            poly: Poly::new(pc),
            poles,
        }
    }

    /// Multiplicative inverse, via root finding on the numerator.
    pub fn recip(&self, tol: f64) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::RootFinding("reciprocal of zero".into()));
        }
        Self::from_polys(&self.denominator(), &self.numerator(), tol)
    }

    pub fn checked_div(&self, rhs: &Self, tol: f64) -> Result<Self> {
        Ok(self * &rhs.recip(tol)?)
    }

    /// Laurent expansion at `center` through order `order`.
    pub fn local_jet(&self, center: Complex64, order: i32) -> LocalJet {
        let mut low = 0;
        let mut principal: &[Complex64] = &[];
        for p in &self.poles {
            if same_point(p.pole, center) {
                principal = &p.coeffs;
                low = -(p.order() as i32);
            }
        }
        if order < low {
            return LocalJet::zero(center, order);
        }
        let mut coeffs = vec![ZERO; (order - low + 1) as usize];
        for (kidx, &c) in principal.iter().enumerate() {
            let k = kidx as i32 + 1;
            if -k <= order {
                coeffs[(-k - low) as usize] += c;
            }
        }
        if order >= 0 {
            let n = order as usize;
            let taylor = self.poly.taylor_at(center);
            for (m, &a) in taylor.iter().enumerate().take(n + 1) {
                coeffs[(m as i32 - low) as usize] += a;
            }
            for p in &self.poles {
                if same_point(p.pole, center) {
                    continue;
                }
                for (m, a) in p.taylor_at(center, n).into_iter().enumerate() {
                    coeffs[(m as i32 - low) as usize] += a;
                }
            }
        }
        LocalJet::new(center, low, coeffs, order)
    }

    /// Polynomial part plus the list of nonzero pole terms.
    pub fn partial_fractions(&self, tol: f64) -> Result<PartialFractions> {
        check_separation(self.poles(), tol)?;
        let terms = self
            .poles
            .iter()
            .flat_map(|p| {
                p.coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.norm() > 0.0)
                    .map(move |(k, &c)| (p.pole, k + 1, c))
            })
            .collect();
        Ok(PartialFractions {
            polynomial: self.poly.clone(),
            terms,
        })
    }

    /// Rational integration. Pole terms of order at least two integrate in
    /// closed form; simple-pole coefficients larger than `tol` (relative to
    /// the input scale) are returned as residues.
    pub fn hermite_integrate(&self, tol: f64) -> Result<HermiteIntegral> {
        check_separation(self.poles(), tol)?;
        let scale = self
            .poles
            .iter()
            .flat_map(|p| p.coeffs.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let mut residues = Vec::new();
        let mut parts = Vec::new();
        for p in &self.poles {
            if let Some(&r) = p.coeffs.first() {
                if r.norm() > tol * (1.0 + scale) {
                    residues.push((p.pole, r));
                }
            }
            if p.coeffs.len() >= 2 {
                let coeffs = p.coeffs[1..]
                    .iter()
                    .enumerate()
                    .map(|(idx, &c)| {
                        let k = idx as f64 + 2.0;
                        c / (1.0 - k)
                    })
                    .collect();
                parts.push(PolePart {
                    pole: p.pole,
                    coeffs,
                });
            }
        }
        Ok(HermiteIntegral {
            rational_part: Self::from_parts(Poly::zero(), parts),
            residues,
            polynomial_part: self.poly.integral(),
        })
    }

    /// Largest `|f(t) - g(t)|` over the given points.
    pub fn max_deviation(&self, other: &Self, points: &[Complex64]) -> f64 {
        points
            .iter()
            .map(|&t| (self.eval(t) - other.eval(t)).norm())
            .fold(0.0, f64::max)
    }

    fn polynomial_part_of_poly_times(poly: &Poly, part: &PolePart) -> Poly {
        let taylor = poly.taylor_at(part.pole);
        let mut shifted = vec![ZERO; taylor.len()];
        for (kidx, &c) in part.coeffs.iter().enumerate() {
            let k = kidx + 1;
            for m in k..taylor.len() {
                shifted[m - k] += taylor[m] * c;
            }
        }
        Poly::from_taylor(part.pole, &shifted)
    }
}

/// Equal-free wrapper used by [`RatFun::from_polys`] callers.
pub fn rat_normalize(f: &RatFun, tol: f64) -> RatFun {
    f.normalized(tol)
}

fn check_separation(points: impl Iterator<Item = Complex64>, tol: f64) -> Result<()> {
    let pts: Vec<Complex64> = points.collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = (pts[i] - pts[j]).norm();
            if d <= tol * (1.0 + pts[i].norm()) {
                return Err(Error::IllConditioned {
                    first: pts[i],
                    second: pts[j],
                    distance: d,
                });
            }
        }
    }
    Ok(())
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        let parts = self.poles.iter().chain(&rhs.poles).cloned().collect();
        RatFun::from_parts(&self.poly + &rhs.poly, parts)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        self.scale(-ONE)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        let mut poly = &self.poly * &rhs.poly;
        for part in &rhs.poles {
            poly = &poly + &RatFun::polynomial_part_of_poly_times(&self.poly, part);
        }
        for part in &self.poles {
            poly = &poly + &RatFun::polynomial_part_of_poly_times(&rhs.poly, part);
        }
        let mut centers: Vec<Complex64> = Vec::new();
        for p in self.poles().chain(rhs.poles()) {
            if !centers.iter().any(|&c| same_point(c, p)) {
                centers.push(p);
            }
        }
        let parts = centers
            .into_iter()
            .map(|r| {
                let kf = self.pole_order_at(r) as i32;
                let kg = rhs.pole_order_at(r) as i32;
                let jf = self.local_jet(r, kg - 1);
                let jg = rhs.local_jet(r, kf - 1);
                let prod = &jf * &jg;
                let total = kf + kg;
                PolePart {
                    pole: r,
                    coeffs: (1..=total).map(|k| prod.coeff(-k)).collect(),
                }
            })
            .collect();
        RatFun::from_parts(poly, parts)
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)?;
        for p in &self.poles {
            for (kidx, c) in p.coeffs.iter().enumerate() {
                if c.norm() == 0.0 {
                    continue;
                }
                write!(f, " + ({c})/(t - ({}))^{}", p.pole, kidx + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn samples() -> Vec<Complex64> {
        (0..10)
            .map(|k| Complex64::new(0.37 * k as f64 - 1.3, 0.21 * k as f64 + 0.5))
            .collect()
    }

    #[test]
    fn normalize_cancels_common_roots() {
        let f = RatFun::from_polys(
            &Poly::from_real(&[-1.0, 0.0, 1.0]),
            &Poly::from_real(&[-1.0, 1.0]),
            1e-9,
        )
        .unwrap();
        assert!(f.pole_parts().is_empty());
        assert!((f.polynomial_part() - &Poly::from_real(&[1.0, 1.0])).max_abs() < 1e-12);

        let two_x = RatFun::from_polys(
            &Poly::from_real(&[0.0, 2.0]),
            &Poly::from_real(&[2.0]),
            1e-9,
        )
        .unwrap();
        assert!((two_x.polynomial_part() - &Poly::x()).max_abs() < 1e-15);

        let num = Poly::from_roots(&[c(1.0), c(2.0)]);
        let den = Poly::from_roots(&[c(1.0), c(3.0)]);
        let f = RatFun::from_polys(&num, &den, 1e-9).unwrap();
        assert_eq!(f.pole_parts().len(), 1);
        assert!((f.pole_parts()[0].pole - c(3.0)).norm() < 1e-12);
        let expect = |t: Complex64| (t - 2.0) / (t - 3.0);
        for t in samples() {
            assert!((f.eval(t) - expect(t)).norm() < 1e-10);
        }
        let d = f.denominator();
        assert!((d.leading() - ONE).norm() < 1e-15);
    }

    #[test]
    fn partial_fraction_examples() {
        let f =
            RatFun::from_polys(&Poly::one(), &Poly::from_real(&[-1.0, 0.0, 1.0]), 1e-9).unwrap();
        let pf = f.partial_fractions(1e-9).unwrap();
        assert_eq!(pf.terms.len(), 2);
        for (p, k, coeff) in pf.terms {
            assert_eq!(k, 1);
            let expect = if p.re > 0.0 { 0.5 } else { -0.5 };
            assert!((coeff - c(expect)).norm() < 1e-12);
        }

        let g =
            RatFun::from_polys(&Poly::one(), &Poly::from_roots(&[c(1.0), c(1.0)]), 1e-9).unwrap();
        let pf = g.partial_fractions(1e-9).unwrap();
        assert_eq!(pf.terms.len(), 1);
        assert_eq!(pf.terms[0].1, 2);
        assert!((pf.terms[0].2 - ONE).norm() < 1e-7);

        let pf = RatFun::from_poly(Poly::x())
            .partial_fractions(1e-9)
            .unwrap();
        assert!(pf.terms.is_empty());
        assert_eq!(pf.polynomial, Poly::x());
    }

    #[test]
    fn jet_examples() {
        let f = RatFun::pole_term(c(1.0), 1, ONE);
        let j = f.local_jet(c(1.0), 3);
        assert_eq!(j.lowest_order(), -1);
        assert!((j.coeff(-1) - ONE).norm() < 1e-15);

        let g = RatFun::pole_term(c(0.0), 1, ONE);
        let j = g.local_jet(c(1.0), 4);
        for k in 0..=4 {
            let expect = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((j.coeff(k) - c(expect)).norm() < 1e-14);
        }

        let h = &(&RatFun::pole_term(c(0.0), 1, c(-1.0)) + &RatFun::pole_term(c(2.0), 1, c(-1.0)))
            + &RatFun::pole_term(c(1.0), 1, c(2.0));
        let j = h.local_jet(c(1.0), 2);
        assert!((j.coeff(-1) - c(2.0)).norm() < 1e-15);
        assert!(j.coeff(0).norm() < 1e-15);
    }

    #[test]
    fn hermite_examples() {
        let h = RatFun::from_poly(Poly::from_real(&[0.0, 2.0]))
            .hermite_integrate(1e-9)
            .unwrap();
        assert!(h.rational_part.is_zero());
        assert!(h.residues.is_empty());
        assert_eq!(h.polynomial_part, Poly::from_real(&[0.0, 0.0, 1.0]));

        let f = RatFun::pole_term(c(1.0), 2, ONE);
        let h = f.hermite_integrate(1e-9).unwrap();
        assert!(h.residues.is_empty());
        let expect = RatFun::pole_term(c(1.0), 1, -ONE);
        assert!(h.rational_part.max_deviation(&expect, &samples()) < 1e-14);

        let g = RatFun::from_polys(&Poly::x(), &Poly::from_roots(&[c(1.0), c(1.0)]), 1e-9).unwrap();
        let h = g.hermite_integrate(1e-9).unwrap();
        assert_eq!(h.residues.len(), 1);
        assert!((h.residues[0].0 - ONE).norm() < 1e-7);
        assert!((h.residues[0].1 - ONE).norm() < 1e-7);
        assert!(h.rational_part.max_deviation(&expect, &samples()) < 1e-7);
    }

    #[test]
    fn numerator_denominator_round_trip() {
        let f = &(&RatFun::pole_term(c(0.5), 2, c(3.0))
            + &RatFun::pole_term(Complex64::new(-1.0, 1.0), 1, c(-2.0)))
            + &RatFun::from_poly(Poly::from_real(&[1.0, 0.0, 1.0]));
        let num = f.numerator();
        let den = f.denominator();
        for t in samples() {
            assert!((num.eval(t) / den.eval(t) - f.eval(t)).norm() < 1e-10);
        }
        let back = RatFun::from_polys(&num, &den, 1e-9).unwrap();
        assert!(back.max_deviation(&f, &samples()) < 1e-6);
    }

    #[test]
    fn multiplication_and_reciprocal() {
        let f =
            &RatFun::pole_term(c(0.0), 1, ONE) + &RatFun::from_poly(Poly::from_real(&[1.0, 2.0]));
        let g = &RatFun::pole_term(c(0.0), 2, c(2.0)) + &RatFun::pole_term(c(1.0), 1, c(-1.0));
        let prod = &f * &g;
        for t in samples() {
            assert!((prod.eval(t) - f.eval(t) * g.eval(t)).norm() < 1e-10);
        }
        let inv = g.recip(1e-9).unwrap();
        for t in samples() {
            assert!((inv.eval(t) * g.eval(t) - ONE).norm() < 1e-8);
        }
    }
}
