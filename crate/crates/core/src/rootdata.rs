//! Generalized Cartan matrices, coweights in pairing coordinates and the
//! Weyl group action on them.
//!
//! The pairing convention is fixed throughout the crate: `a[i][j]` is the
//! pairing of the simple root `j` with the simple coroot `i`. Row `i` of the
//! matrix is therefore the coordinate vector of the simple coroot `i`.
//!
//! Indices are zero-based in the API; displayed words use one-based letters.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Finite-type label, or `General` for an arbitrary generalized Cartan matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CartanKind {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    General,
}

impl CartanKind {
    fn letter(self) -> &'static str {
        match self {
            CartanKind::A => "A",
            CartanKind::B => "B",
            CartanKind::C => "C",
            CartanKind::D => "D",
            CartanKind::E => "E",
            CartanKind::F => "F",
            CartanKind::G => "G",
            CartanKind::General => "general",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedCartanMatrix {
    kind: CartanKind,
    rank: usize,
    entries: Vec<i64>,
}

impl GeneralizedCartanMatrix {
    /// Validates an explicit integer matrix.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 {
            return Err(Error::InvalidCartan("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(rank * rank);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidCartan(format!(
                    "row {} has length {}, expected {}",
                    i + 1,
                    row.len(),
                    rank
                )));
            }
            entries.extend_from_slice(row);
        }
        let m = Self {
            kind: CartanKind::General,
            rank,
            entries,
        };
        m.validate()?;
        Ok(m)
    }

    /// Standard matrix of a finite type.
    pub fn finite(kind: CartanKind, rank: usize) -> Result<Self> {
        let bad = || Error::InvalidCartan(format!("type {}{} does not exist", kind.letter(), rank));
        let mut m = vec![vec![0i64; rank]; rank];
        let chain = |m: &mut Vec<Vec<i64>>, upto: usize| {
            for i in 0..rank {
                m[i][i] = 2;
            }
            for i in 0..upto.saturating_sub(1) {
                m[i][i + 1] = -1;
                m[i + 1][i] = -1;
            }
        };
        match kind {
            CartanKind::A => {
                if rank < 1 {
                    return Err(bad());
                }
                chain(&mut m, rank);
            }
            CartanKind::B => {
                if rank < 2 {
                    return Err(bad());
                }
                chain(&mut m, rank);
                // short simple root last: its coroot is twice as long
                m[rank - 1][rank - 2] = -2;
            }
            CartanKind::C => {
                if rank < 2 {
                    return Err(bad());
                }
                chain(&mut m, rank);
                m[rank - 2][rank - 1] = -2;
            }
            CartanKind::D => {
                if rank < 3 {
                    return Err(bad());
                }
                chain(&mut m, rank - 1);
                m[rank - 1][rank - 1] = 2;
                m[rank - 3][rank - 1] = -1;
                m[rank - 1][rank - 3] = -1;
            }
            CartanKind::E => {
                if !(6..=8).contains(&rank) {
                    return Err(bad());
                }
                // Bourbaki numbering: 1-3-4-5-...-rank chain, node 2 attached to 4.
                for i in 0..rank {
                    m[i][i] = 2;
                }
                let mut link = |a: usize, b: usize| {
                    m[a - 1][b - 1] = -1;
                    m[b - 1][a - 1] = -1;
                };
                link(1, 3);
                link(2, 4);
                for a in 3..rank {
                    link(a, a + 1);
                }
            }
            CartanKind::F => {
                if rank != 4 {
                    return Err(bad());
                }
                m = vec![
                    vec![2, -1, 0, 0],
                    vec![-1, 2, -1, 0],
                    vec![0, -2, 2, -1],
                    vec![0, 0, -1, 2],
                ];
            }
            CartanKind::G => {
                if rank != 2 {
                    return Err(bad());
                }
                m = vec![vec![2, -3], vec![-1, 2]];
            }
            CartanKind::General => {
                return Err(Error::InvalidCartan(
                    "the general kind needs explicit entries".into(),
                ))
            }
        }
        let mut out = Self::from_rows(&m)?;
        out.kind = kind;
        Ok(out)
    }

    /// Parses labels such as `A2`, `B3`, `G2` (case-insensitive).
    pub fn parse(label: &str) -> Result<Self> {
        let label = label.trim();
        let mut chars = label.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::UnknownCartanType(label.into()))?;
        let kind = match letter.to_ascii_uppercase() {
            'A' => CartanKind::A,
            'B' => CartanKind::B,
            'C' => CartanKind::C,
            'D' => CartanKind::D,
            'E' => CartanKind::E,
            'F' => CartanKind::F,
            'G' => CartanKind::G,
            _ => return Err(Error::UnknownCartanType(label.into())),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let rank: usize = rest
            .parse()
            .map_err(|_| Error::UnknownCartanType(label.into()))?;
        Self::finite(kind, rank)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rank;
        for i in 0..n {
            if self.get(i, i) != 2 {
                return Err(Error::InvalidCartan(format!(
                    "diagonal entry ({0},{0}) is {1}, expected 2",
                    i + 1,
                    self.get(i, i)
                )));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if self.get(i, j) > 0 {
                    return Err(Error::InvalidCartan(format!(
                        "off-diagonal entry ({},{}) is positive",
                        i + 1,
                        j + 1
                    )));
                }
                if (self.get(i, j) == 0) != (self.get(j, i) == 0) {
                    return Err(Error::InvalidCartan(format!(
                        "zero pattern asymmetric at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> CartanKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Pairing of simple root `j` with simple coroot `i`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.rank + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    pub fn is_finite_type(&self) -> bool {
        self.kind != CartanKind::General
    }

    /// Cartan matrix of the Langlands dual algebra.
    pub fn langlands_dual(&self) -> Self {
        let n = self.rank;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.get(i, j);
            }
        }
        let kind = match self.kind {
            CartanKind::B => CartanKind::C,
            CartanKind::C => CartanKind::B,
            CartanKind::General => CartanKind::General,
            k => k,
        };
        Self {
            kind,
            rank: n,
            entries,
        }
    }

    /// The simple coroot `i` as a coweight.
    pub fn simple_coroot(&self, i: usize) -> Coweight {
        Coweight::from_integers(&self.entries[i * self.rank..(i + 1) * self.rank])
    }

    /// Sum of the fundamental coweights.
    pub fn rho(&self) -> Coweight {
        Coweight::from_integers(&vec![1; self.rank])
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.rank {
            Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank,
            })
        } else {
            Ok(())
        }
    }

    fn check_len(&self, mu: &Coweight) -> Result<()> {
        if mu.rank() != self.rank {
            Err(Error::DimensionMismatch {
                expected: self.rank,
                found: mu.rank(),
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for GeneralizedCartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == CartanKind::General {
            write!(f, "{:?}", self.rows())
        } else {
            write!(f, "{}{}", self.kind.letter(), self.rank)
        }
    }
}

/// Loads a Cartan matrix from a type label or explicit rows.
pub enum CartanLabel<'a> {
    Type(CartanKind, usize),
    Named(&'a str),
    Explicit(&'a [Vec<i64>]),
}

pub fn load_cartan(label: CartanLabel<'_>) -> Result<GeneralizedCartanMatrix> {
    match label {
        CartanLabel::Type(kind, rank) => GeneralizedCartanMatrix::finite(kind, rank),
        CartanLabel::Named(s) => GeneralizedCartanMatrix::parse(s),
        CartanLabel::Explicit(rows) => GeneralizedCartanMatrix::from_rows(rows),
    }
}

/// A coweight stored through its pairings with the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coweight(Vec<Rational64>);

impl Coweight {
    pub fn new(pairings: Vec<Rational64>) -> Self {
        Self(pairings)
    }

    pub fn from_integers(p: &[i64]) -> Self {
        Self(p.iter().map(|&x| Rational64::from_integer(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![Rational64::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn pairings(&self) -> &[Rational64] {
        &self.0
    }

    pub fn pairing(&self, a: usize) -> Rational64 {
        self.0[a]
    }

    pub fn pairings_f64(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect()
    }

    /// Integer pairings, when all are integral.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|r| r.is_integer().then(|| r.to_integer()))
            .collect()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|r| !r.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|r| r.is_integer())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|r| r * k).collect())
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Coweight {
    type Output = Coweight;
    fn add(self, rhs: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Coweight {
    type Output = Coweight;
    fn sub(self, rhs: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Coweight {
    type Output = Coweight;
    fn neg(self) -> Coweight {
        Coweight(self.0.iter().map(|a| -a).collect())
    }
}

/// Product of simple reflections `s_{i1} s_{i2} ... s_{ik}`; acting on a
/// coweight, the rightmost letter is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WeylWord(pub Vec<usize>);

impl WeylWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// Cancels adjacent repeated letters. This is only a partial reduction;
    /// braid relations are not applied.
    pub fn cancel_squares(&self) -> Self {
        let mut out: Vec<usize> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    /// One-based letters, as written in documents.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|l| l + 1).collect()
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "s{}", l + 1)?;
        }
        Ok(())
    }
}

/// `s_i(mu) = mu - <alpha_i, mu> alpha_i^vee`.
pub fn reflect(a: &GeneralizedCartanMatrix, i: usize, mu: &Coweight) -> Result<Coweight> {
    a.check_index(i)?;
    a.check_len(mu)?;
    Ok(reflect_unchecked(a, i, mu))
}

fn reflect_unchecked(a: &GeneralizedCartanMatrix, i: usize, mu: &Coweight) -> Coweight {
    let p = mu.0[i];
    Coweight(
        mu.0.iter()
            .enumerate()
            .map(|(b, &x)| x - p * a.get(i, b))
            .collect(),
    )
}

pub fn weyl_act(a: &GeneralizedCartanMatrix, word: &WeylWord, mu: &Coweight) -> Result<Coweight> {
    a.check_len(mu)?;
    for &l in &word.0 {
        a.check_index(l)?;
    }
    Ok(word
        .0
        .iter()
        .rev()
        .fold(mu.clone(), |acc, &l| reflect_unchecked(a, l, &acc)))
}

/// Moves `mu` into the dominant chamber by reflecting at the smallest index
/// with a negative pairing. The returned word `w` satisfies `w(dominant) = mu`.
pub fn to_dominant(
    a: &GeneralizedCartanMatrix,
    mu: &Coweight,
    cap: usize,
) -> Result<(Coweight, WeylWord)> {
    a.check_len(mu)?;
    let mut cur = mu.clone();
    let mut letters = Vec::new();
    loop {
        match cur.0.iter().position(|r| r.is_negative()) {
            None => return Ok((cur, WeylWord(letters))),
            Some(i) => {
                if letters.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                cur = reflect_unchecked(a, i, &cur);
                letters.push(i);
            }
        }
    }
}

/// Solves `r = -y(lambda + rho) + rho` for `y`.
pub fn residue_to_weyl(
    a: &GeneralizedCartanMatrix,
    r: &Coweight,
    lambda: &Coweight,
    cap: usize,
) -> Result<Option<WeylWord>> {
    a.check_len(r)?;
    a.check_len(lambda)?;
    let rho = a.rho();
    let target = &rho - r;
    let (dom, word) = to_dominant(a, &target, cap)?;
    Ok((dom == lambda + &rho).then_some(word))
}

/// Longest Weyl group element of a finite type, as the word sending rho to -rho.
pub fn longest_element(a: &GeneralizedCartanMatrix, cap: usize) -> Result<WeylWord> {
    if !a.is_finite_type() {
        return Err(Error::UnsupportedType(
            "longest element requires a finite type".into(),
        ));
    }
    let (_, w) = to_dominant(a, &-&a.rho(), cap)?;
    Ok(w)
}

/// `-w_0(mu)`, the highest weight of the dual representation.
pub fn dual_highest(a: &GeneralizedCartanMatrix, mu: &Coweight, cap: usize) -> Result<Coweight> {
    let w0 = longest_element(a, cap)?;
    Ok(-&weyl_act(a, &w0, mu)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(p: &[i64]) -> Coweight {
        Coweight::from_integers(p)
    }

    #[test]
    fn load_examples() {
        let a1 = load_cartan(CartanLabel::Type(CartanKind::A, 1)).unwrap();
        assert_eq!(a1.rows(), vec![vec![2]]);
        let a2 = load_cartan(CartanLabel::Named("A2")).unwrap();
        assert_eq!(a2.rows(), vec![vec![2, -1], vec![-1, 2]]);
        let g2 = GeneralizedCartanMatrix::parse("g2").unwrap();
        let mut off = vec![g2.get(0, 1), g2.get(1, 0)];
        off.sort();
        assert_eq!(off, vec![-3, -1]);
        // long coroot pairs with the long root to -3 when alpha_1 is short
        assert_eq!(g2.get(0, 1), -3);
    }

    #[test]
    fn finite_types_validate() {
        for (k, r) in [
            (CartanKind::A, 4),
            (CartanKind::B, 3),
            (CartanKind::C, 3),
            (CartanKind::D, 4),
            (CartanKind::E, 6),
            (CartanKind::E, 7),
            (CartanKind::E, 8),
            (CartanKind::F, 4),
            (CartanKind::G, 2),
        ] {
            let m = GeneralizedCartanMatrix::finite(k, r).unwrap();
            assert_eq!(m.rank(), r);
        }
        let b3 = GeneralizedCartanMatrix::parse("B3").unwrap();
        assert_eq!(b3.langlands_dual(), {
            let mut c = GeneralizedCartanMatrix::parse("C3").unwrap();
            c.kind = CartanKind::C;
            c
        });
    }

    #[test]
    fn malformed_matrices_rejected() {
        assert!(GeneralizedCartanMatrix::from_rows(&[vec![1]]).is_err());
        assert!(GeneralizedCartanMatrix::from_rows(&[vec![2, 1], vec![-1, 2]]).is_err());
        assert!(GeneralizedCartanMatrix::from_rows(&[vec![2, 0], vec![-1, 2]]).is_err());
        assert!(GeneralizedCartanMatrix::from_rows(&[vec![2, -1]]).is_err());
        // affine A1 is a valid generalized Cartan matrix
        assert!(GeneralizedCartanMatrix::from_rows(&[vec![2, -2], vec![-2, 2]]).is_ok());
        assert!(GeneralizedCartanMatrix::parse("X3").is_err());
        assert!(GeneralizedCartanMatrix::parse("E5").is_err());
    }

    #[test]
    fn reflect_examples() {
        let a1 = GeneralizedCartanMatrix::parse("A1").unwrap();
        assert_eq!(reflect(&a1, 0, &cw(&[1])).unwrap(), cw(&[-1]));
        assert_eq!(reflect(&a1, 0, &cw(&[0])).unwrap(), cw(&[0]));
        let a2 = GeneralizedCartanMatrix::parse("A2").unwrap();
        assert_eq!(reflect(&a2, 0, &cw(&[1, 0])).unwrap(), cw(&[-1, 1]));
        assert!(reflect(&a2, 2, &cw(&[1, 0])).is_err());
    }

    #[test]
    fn to_dominant_examples() {
        let a1 = GeneralizedCartanMatrix::parse("A1").unwrap();
        assert_eq!(
            to_dominant(&a1, &cw(&[-3]), 10).unwrap(),
            (cw(&[3]), WeylWord(vec![0]))
        );
        assert_eq!(
            to_dominant(&a1, &cw(&[2]), 10).unwrap(),
            (cw(&[2]), WeylWord::identity())
        );
    }

    #[test]
    fn to_dominant_a2_against_orbit_enumeration() {
        let a2 = GeneralizedCartanMatrix::parse("A2").unwrap();
        let mu = cw(&[-1, -1]);
        // orbit by closing under reflections
        let mut orbit = vec![mu.clone()];
        let mut k = 0;
        while k < orbit.len() {
            for i in 0..2 {
                let r = reflect(&a2, i, &orbit[k]).unwrap();
                if !orbit.contains(&r) {
                    orbit.push(r);
                }
            }
            k += 1;
        }
        assert_eq!(orbit.len(), 6);
        let dominant: Vec<_> = orbit.iter().filter(|c| c.is_dominant()).collect();
        assert_eq!(dominant, vec![&cw(&[1, 1])]);
        let (d, w) = to_dominant(&a2, &mu, 20).unwrap();
        assert_eq!(&d, dominant[0]);
        assert_eq!(weyl_act(&a2, &w, &d).unwrap(), mu);
    }

    #[test]
    fn weyl_act_examples() {
        let a2 = GeneralizedCartanMatrix::parse("A2").unwrap();
        let rho = a2.rho();
        assert_eq!(weyl_act(&a2, &WeylWord::identity(), &rho).unwrap(), rho);
        assert_eq!(weyl_act(&a2, &WeylWord(vec![0, 0]), &rho).unwrap(), rho);
        let composed = reflect(&a2, 0, &reflect(&a2, 1, &rho).unwrap()).unwrap();
        assert_eq!(
            weyl_act(&a2, &WeylWord(vec![0, 1]), &rho).unwrap(),
            composed
        );
        assert_eq!(composed, cw(&[-2, 1]));
    }

    #[test]
    fn residue_to_weyl_examples() {
        let a1 = GeneralizedCartanMatrix::parse("A1").unwrap();
        let lam = cw(&[2]);
        assert_eq!(
            residue_to_weyl(&a1, &cw(&[-2]), &lam, 10).unwrap(),
            Some(WeylWord::identity())
        );
        assert_eq!(
            residue_to_weyl(&a1, &cw(&[4]), &lam, 10).unwrap(),
            Some(WeylWord(vec![0]))
        );
        assert_eq!(residue_to_weyl(&a1, &cw(&[-1]), &lam, 10).unwrap(), None);
    }

    #[test]
    fn longest_element_and_dual() {
        let a2 = GeneralizedCartanMatrix::parse("A2").unwrap();
        let w0 = longest_element(&a2, 20).unwrap();
        assert_eq!(w0.len(), 3);
        assert_eq!(dual_highest(&a2, &cw(&[1, 0]), 20).unwrap(), cw(&[0, 1]));
        let b2 = GeneralizedCartanMatrix::parse("B2").unwrap();
        assert_eq!(longest_element(&b2, 20).unwrap().len(), 4);
        let g2 = GeneralizedCartanMatrix::parse("G2").unwrap();
        assert_eq!(longest_element(&g2, 20).unwrap().len(), 6);
    }

    #[test]
    fn cap_exceeded_outside_tits_cone() {
        // affine A1: -delta-like coweights never become dominant
        let aff = GeneralizedCartanMatrix::from_rows(&[vec![2, -2], vec![-2, 2]]).unwrap();
        let r = to_dominant(&aff, &cw(&[-1, 1]), 50);
        assert!(matches!(r, Err(Error::CapExceeded { cap: 50 })));
    }
}
