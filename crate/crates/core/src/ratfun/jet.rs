use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Truncated Laurent expansion `sum_{k=lowest}^{order} c_k (t - center)^k`.
///
/// Every stored coefficient is exact; `order` is the highest order known.
/// Arithmetic propagates the truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalJet {
    center: Complex64,
    lowest: i32,
    coeffs: Vec<Complex64>,
    order: i32,
}

impl LocalJet {
    /// Builds a jet from coefficients starting at `lowest`; coefficients past
    /// `order` are discarded.
    pub fn new(center: Complex64, lowest: i32, mut coeffs: Vec<Complex64>, order: i32) -> Self {
        let keep = (order - lowest + 1).max(0) as usize;
        coeffs.truncate(keep);
        coeffs.resize(keep, ZERO);
        let mut jet = Self {
            center,
            lowest,
            coeffs,
            order,
        };
        jet.strip_leading_zeros();
        jet
    }

    pub fn zero(center: Complex64, order: i32) -> Self {
        Self {
            center,
            lowest: order + 1,
            coeffs: Vec::new(),
            order,
        }
    }

    pub fn constant(center: Complex64, value: Complex64, order: i32) -> Self {
        Self::new(center, 0, vec![value], order)
    }

    /// The coordinate `t - center`.
    pub fn coordinate(center: Complex64, order: i32) -> Self {
        Self::new(center, 1, vec![ONE], order)
    }

    /// Jet of the identity function `t` (value `center` at the center).
    pub fn identity(center: Complex64, order: i32) -> Self {
        Self::new(center, 0, vec![center, ONE], order)
    }

    fn strip_leading_zeros(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| **c == ZERO).count();
        if lead == self.coeffs.len() {
            self.lowest = self.order + 1;
            self.coeffs.clear();
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.lowest += lead as i32;
        }
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// Lowest order with a nonzero coefficient (`order + 1` for the zero jet).
    pub fn lowest_order(&self) -> i32 {
        self.lowest
    }

    /// Highest order known exactly.
    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `(t - center)^k`; zero outside the stored range.
    pub fn coeff(&self, k: i32) -> Complex64 {
        if k < self.lowest || k > self.order {
            return ZERO;
        }
        self.coeffs[(k - self.lowest) as usize]
    }

    /// Coefficients of the negative orders, as `(order, coefficient)` pairs.
    pub fn principal_part(&self) -> Vec<(i32, Complex64)> {
        (self.lowest..0.min(self.order + 1))
            .map(|k| (k, self.coeff(k)))
            .collect()
    }

    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        Self::new(self.center, self.lowest, self.coeffs.clone(), order)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(
            self.center,
            self.lowest,
            self.coeffs.iter().map(|c| c * s).collect(),
            self.order,
        )
    }

    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero(self.center, self.order - 1);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (self.lowest + i as i32) as f64)
            .collect();
        Self::new(self.center, self.lowest - 1, coeffs, self.order - 1)
    }

    /// Multiplicative inverse; the zero jet has none.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let rel = (self.order - self.lowest) as usize;
        let a0 = self.coeffs[0];
        let mut inv = vec![ZERO; rel + 1];
        inv[0] = ONE / a0;
        for k in 1..=rel {
            let mut s = ZERO;
            for j in 1..=k.min(self.coeffs.len() - 1) {
                s += self.coeffs[j] * inv[k - j];
            }
            inv[k] = -s / a0;
        }
        Some(Self::new(
            self.center,
            -self.lowest,
            inv,
            -self.lowest + rel as i32,
        ))
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        Some(self * &rhs.recip()?)
    }

    pub fn powi(&self, n: i32) -> Option<Self> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        if n == 0 {
            return Some(Self::constant(self.center, ONE, self.order - self.lowest));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = &acc * self;
        }
        Some(acc)
    }

    /// Evaluates the stored truncation at a nearby point.
    pub fn eval(&self, t: Complex64) -> Complex64 {
        let s = t - self.center;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * s.powi(self.lowest + i as i32))
            .sum()
    }

    /// `self(inner(s))`, where `self` is centered at `inner`'s value at its
    /// own center and `inner` is a Taylor jet with nonzero linear term.
    pub fn compose(&self, inner: &LocalJet) -> Option<Self> {
        let base = inner.coeff(0);
        if (base - self.center).norm() > 1e-12 * (1.0 + base.norm()) || inner.lowest < 0 {
            return None;
        }
        let mut delta = inner.clone();
        if delta.lowest <= 0 {
            delta = &delta - &Self::constant(inner.center, base, inner.order);
        }
        if delta.lowest != 1 {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(inner.center, self.order.min(delta.order)));
        }
        let out_order = self.order.min(self.lowest + delta.order - 1);
        let mut acc = Self::zero(inner.center, out_order);
        let mut power = delta.powi(self.lowest)?.truncate(out_order);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if self.lowest + i as i32 > self.order {
                break;
            }
            acc = &acc + &power.scale(c).truncate(out_order);
            power = (&power * &delta).truncate(out_order);
        }
        Some(acc.truncate(out_order))
    }
}

fn combine(a: &LocalJet, b: &LocalJet, sign: f64) -> LocalJet {
    debug_assert!(
        (a.center - b.center).norm() == 0.0,
        "jets at different centers"
    );
    let order = a.order.min(b.order);
    let lowest = a.lowest.min(b.lowest);
    if lowest > order {
        return LocalJet::zero(a.center, order);
    }
    let coeffs = (lowest..=order)
        .map(|k| a.coeff(k) + b.coeff(k) * sign)
        .collect();
    LocalJet::new(a.center, lowest, coeffs, order)
}

impl Add for &LocalJet {
    type Output = LocalJet;
    fn add(self, rhs: &LocalJet) -> LocalJet {
        combine(self, rhs, 1.0)
    }
}

impl Sub for &LocalJet {
    type Output = LocalJet;
    fn sub(self, rhs: &LocalJet) -> LocalJet {
        combine(self, rhs, -1.0)
    }
}

impl Neg for &LocalJet {
    type Output = LocalJet;
    fn neg(self) -> LocalJet {
        self.scale(-ONE)
    }
}

impl Mul for &LocalJet {
    type Output = LocalJet;
    fn mul(self, rhs: &LocalJet) -> LocalJet {
        if self.is_zero() || rhs.is_zero() {
            let order = (self.order + rhs.lowest.min(rhs.order))
                .min(rhs.order + self.lowest.min(self.order));
            return LocalJet::zero(self.center, order);
        }
        let rel = (self.order - self.lowest).min(rhs.order - rhs.lowest);
        let lowest = self.lowest + rhs.lowest;
        let n = rel as usize + 1;
        let mut out = vec![ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            for (j, &b) in rhs.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        LocalJet::new(self.center, lowest, out, lowest + rel)
    }
}
