//! Sparse commutative polynomials and free-algebra elements.

use alloc::collections::btree_map::{BTreeMap, Entry};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::monomial::{MultiIndex, NcWord};
use crate::scalar::{CoeffText, Scalar};

/// Which coordinate family the generators belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    /// Real-type coordinates `x_i`, conjugation acts on coefficients only.
    X,
    /// Wick coordinates `w_i` with `w_i* = w_{d+1-i}`.
    W,
}

impl GeneratorKind {
    pub fn symbol(self) -> char {
        match self {
            GeneratorKind::X => 'x',
            GeneratorKind::W => 'w',
        }
    }
}

/// Finite sum `Σ f_K x^K` without stored zeros.
#[derive(Clone, PartialEq)]
pub struct Polynomial<S: Scalar> {
    dim: usize,
    kind: GeneratorKind,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(dim: usize, kind: GeneratorKind) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self { dim, kind, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, kind: GeneratorKind, c: S) -> Self {
        Self::monomial(dim, kind, MultiIndex::zero(dim), c)
    }

    pub fn one(dim: usize, kind: GeneratorKind) -> Self {
        Self::constant(dim, kind, S::one())
    }

    pub fn monomial(dim: usize, kind: GeneratorKind, k: MultiIndex, c: S) -> Self {
        assert_eq!(k.dim(), dim, "exponent vector length");
        let mut p = Self::zero(dim, kind);
        p.add_term(k, c);
        p
    }

    /// The generator with 0-based index `i`.
    pub fn generator(dim: usize, kind: GeneratorKind, i: usize) -> Self {
        Self::monomial(dim, kind, MultiIndex::unit(dim, i), S::one())
    }

    pub fn from_terms(
        dim: usize,
        kind: GeneratorKind,
        terms: impl IntoIterator<Item = (MultiIndex, S)>,
    ) -> Self {
        let mut p = Self::zero(dim, kind);
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, S> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<MultiIndex, S> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &MultiIndex) -> S {
        self.terms.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// Adds `c·x^k` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, k: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(k.dim(), self.dim);
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().plus(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.negate());
        }
        Ok(out)
    }

    /// Pointwise (commutative) product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = Self::zero(self.dim, self.kind);
        for (k, a) in &self.terms {
            for (l, b) in &other.terms {
                out.add_term(k.add(l), a.times(b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.dim, self.kind);
        for (k, a) in &self.terms {
            out.add_term(k.clone(), a.times(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.dim, self.kind), |acc, _| &acc * self)
    }

    /// The involution: conjugated coefficients, and for Wick coordinates
    /// reversed exponent vectors.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero(self.dim, self.kind);
        for (k, c) in &self.terms {
            let k = match self.kind {
                GeneratorKind::X => k.clone(),
                GeneratorKind::W => k.reversed(),
            };
            out.add_term(k, c.conj());
        }
        out
    }

    /// Formal partial derivative in the generator with 0-based index `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim, self.kind);
        for (k, c) in &self.terms {
            let e = k.get(i);
            if e > 0 {
                out.add_term(k.with(i, e - 1), c.times(&S::from_i64(e as i64)));
            }
        }
        out
    }

    /// Lowest total degree present; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.degree()).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.degree()).max()
    }

    /// Terms of total degree exactly `n`.
    pub fn homogeneous_part(&self, n: u32) -> Self {
        Self::from_terms(
            self.dim,
            self.kind,
            self.terms.iter().filter(|(k, _)| k.degree() == n).map(|(k, c)| (k.clone(), c.clone())),
        )
    }

    pub fn max_coeff_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::from_terms(self.dim, self.kind, self.terms.iter().map(|(k, c)| (k.clone(), f(c))))
    }

    /// Fallible coefficient map (e.g. evaluation that may hit a pole).
    pub fn try_map_coeffs<T: Scalar, E>(
        &self,
        f: impl Fn(&S) -> core::result::Result<T, E>,
    ) -> core::result::Result<Polynomial<T>, E> {
        let mut out = Polynomial::zero(self.dim, self.kind);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Same terms, other generator family.
    pub fn with_kind(&self, kind: GeneratorKind) -> Self {
        Self { dim: self.dim, kind, terms: self.terms.clone() }
    }

    /// Evaluates at a point.
    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.dim);
        let mut acc = S::zero();
        for (k, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in k.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.times(&point[i].pow(e as u64));
                }
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Substitutes `images[i]` for generator `i` (commutative composition).
    pub fn compose(&self, images: &[Polynomial<S>]) -> Result<Self> {
        if images.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: images.len() });
        }
        let target = images.first().map_or(self.dim, |p| p.dim);
        let mut out = Polynomial::zero(target, self.kind);
        for (k, c) in &self.terms {
            let mut t = Polynomial::constant(target, self.kind, c.clone());
            for (i, &e) in k.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = t.checked_mul(&images[i])?;
                }
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// True when `self − other` vanishes, exactly for exact rings and within
    /// `tol · max(1, scale)` per coefficient otherwise.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match self.checked_sub(other) {
            Ok(diff) => {
                if S::EXACT {
                    diff.is_zero()
                } else {
                    let scale = self.max_coeff_magnitude().max(other.max_coeff_magnitude()).max(1.0);
                    diff.max_coeff_magnitude() <= tol * scale
                }
            }
            Err(_) => false,
        }
    }

    /// Embeds into the free algebra as standard words.
    pub fn to_nc(&self) -> NcPolynomial<S> {
        let mut out = NcPolynomial::zero(self.dim);
        for (k, c) in &self.terms {
            out.add_term(k.standard_word(), c.clone());
        }
        out
    }

    /// Canonical text; `full` selects round-trip float precision.
    pub fn format(&self, full: bool) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in &self.terms {
            let mono = monomial_text(k, self.kind);
            let (negative, body) = match c.coeff_text(full) {
                CoeffText::One => (false, if mono.is_empty() { "1".into() } else { mono }),
                CoeffText::MinusOne => (true, if mono.is_empty() { "1".into() } else { mono }),
                CoeffText::Real { negative, text } => (negative, join(text, &mono)),
                CoeffText::Compound(text) => (false, join(text, &mono)),
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn join(coeff: String, mono: &str) -> String {
    if mono.is_empty() {
        coeff
    } else {
        alloc::format!("{coeff}*{mono}")
    }
}

fn monomial_text(k: &MultiIndex, kind: GeneratorKind) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, &e) in k.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(alloc::format!("{}{}", kind.symbol(), i + 1)),
            _ => parts.push(alloc::format!("{}{}^{}", kind.symbol(), i + 1, e)),
        }
    }
    parts.join("*")
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(f.alternate()))
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[d={}]({})", self.dim, self.format(true))
    }
}

impl<'a, S: Scalar> Add for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, rhs: Self) -> Polynomial<S> {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl<'a, S: Scalar> Sub for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: Self) -> Polynomial<S> {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl<'a, S: Scalar> Mul for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, rhs: Self) -> Polynomial<S> {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl<'a, S: Scalar> Neg for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn neg(self) -> Polynomial<S> {
        self.scale(&S::one().negate())
    }
}

/// Finite sum of words in the free algebra.
#[derive(Clone, PartialEq)]
pub struct NcPolynomial<S: Scalar> {
    dim: usize,
    terms: BTreeMap<NcWord, S>,
}

impl<S: Scalar> NcPolynomial<S> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn word(dim: usize, w: NcWord, c: S) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(w, c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<NcWord, S> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &NcWord) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, w: NcWord, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().plus(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_standard(&self) -> bool {
        self.terms.keys().all(|w| w.is_standard())
    }

    /// Reads a polynomial made of standard words back as a commutative
    /// polynomial; `None` if any word is not standard.
    pub fn to_commutative(&self, kind: GeneratorKind) -> Option<Polynomial<S>> {
        let mut out = Polynomial::zero(self.dim, kind);
        for (w, c) in &self.terms {
            if !w.is_standard() {
                return None;
            }
            out.add_term(w.content(self.dim), c.clone());
        }
        Some(out)
    }

    /// Free-algebra product (concatenation).
    pub fn concat_mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a.times(b));
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Debug for NcPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CRational;
    use alloc::string::ToString;
    use alloc::vec;

    type P = Polynomial<CRational>;

    #[test]
    fn trivial_ring_examples() {
        let x1 = P::generator(2, GeneratorKind::X, 0);
        let x2 = P::generator(2, GeneratorKind::X, 1);
        assert_eq!(&x1 + &x1, x1.scale(&CRational::from_i64(2)));
        assert_eq!(&x1 * &x2, P::monomial(2, GeneratorKind::X, MultiIndex::new(vec![1, 1]), CRational::one()));
        assert!(x1.scale(&CRational::zero()).terms().is_empty());
    }

    #[test]
    fn conjugation_rules() {
        let c = CRational::complex(1, 1, 2, 1);
        let f = P::monomial(1, GeneratorKind::X, MultiIndex::new(vec![2]), c.clone());
        assert_eq!(f.conjugate().coeff(&MultiIndex::new(vec![2])), c.conj());

        let w = P::monomial(2, GeneratorKind::W, MultiIndex::new(vec![1, 0]), CRational::one());
        assert_eq!(w.conjugate(), P::monomial(2, GeneratorKind::W, MultiIndex::new(vec![0, 1]), CRational::one()));

        let g = P::monomial(3, GeneratorKind::W, MultiIndex::new(vec![2, 0, 1]), CRational::i());
        let expected = P::monomial(3, GeneratorKind::W, MultiIndex::new(vec![1, 0, 2]), CRational::i().negate());
        assert_eq!(g.conjugate(), expected);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = P::one(2, GeneratorKind::X);
        let b = P::one(3, GeneratorKind::X);
        assert_eq!(a.checked_add(&b), Err(Error::DimensionMismatch { left: 2, right: 3 }));
        assert_eq!(a.checked_mul(&a.with_kind(GeneratorKind::W)), Err(Error::KindMismatch));
    }

    #[test]
    fn derivative_and_composition() {
        let x1 = P::generator(2, GeneratorKind::X, 0);
        let x2 = P::generator(2, GeneratorKind::X, 1);
        let f = &(&x1 * &x1) * &x2;
        assert_eq!(f.partial(0), (&x1 * &x2).scale(&CRational::from_i64(2)));
        let one = P::one(2, GeneratorKind::X);
        let shifted = f.compose(&[&x1 + &one, x2.clone()]).unwrap();
        assert_eq!(shifted.eval(&[CRational::zero(), CRational::one()]), CRational::one());
    }

    #[test]
    fn canonical_text() {
        let f = P::from_terms(
            3,
            GeneratorKind::X,
            [
                (MultiIndex::new(vec![0, 0, 1]), CRational::i()),
                (MultiIndex::new(vec![2, 1, 0]), CRational::from_i64(2)),
                (MultiIndex::new(vec![0, 0, 0]), CRational::from_i64(-1)),
            ],
        );
        assert_eq!(f.to_string(), "-1 + (0+1i)*x3 + 2*x1^2*x2");
        assert_eq!(P::zero(2, GeneratorKind::X).to_string(), "0");
    }
}
