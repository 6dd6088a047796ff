//! Star products by rewriting words of the free algebra.
//!
//! A descent `x_j x_i` (`j > i`) is replaced by `x_i x_j + φ(x_j x_i)`, the
//! tail `φ` being a commutative polynomial written in standard order. Words
//! with no descent are standard and read back as commutative monomials.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monomial::{MultiIndex, NcWord};
use crate::poly::{GeneratorKind, NcPolynomial, Polynomial};
use crate::scalar::{Scalar, TruncSeries};

/// Default replacement budget per pair of input monomials.
pub const DEFAULT_STEP_LIMIT: u64 = 1_000_000;

/// Relative tolerance for float comparisons of reduction output.
pub const FLOAT_TOLERANCE: f64 = 1e-10;

/// The deformation data: one tail per generator pair `i < j` (0-based).
/// Missing pairs have a zero tail.
#[derive(Clone, PartialEq)]
pub struct PhiTable<S: Scalar> {
    dim: usize,
    kind: GeneratorKind,
    tails: BTreeMap<(usize, usize), Polynomial<S>>,
}

impl<S: Scalar> core::fmt::Debug for PhiTable<S> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut m = f.debug_map();
        for ((i, j), t) in &self.tails {
            m.entry(&(i + 1, j + 1), t);
        }
        m.finish()
    }
}

impl<S: Scalar> PhiTable<S> {
    /// The commutative table (all tails zero).
    pub fn new(dim: usize, kind: GeneratorKind) -> Self {
        Self { dim, kind, tails: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    /// Sets `φ(x_j x_i)` for 0-based `i < j`.
    pub fn set_tail(&mut self, i: usize, j: usize, tail: Polynomial<S>) -> Result<()> {
        if i >= j || j >= self.dim {
            return Err(Error::InvalidTable(alloc::format!(
                "pair ({}, {}) is not i < j <= {}",
                i + 1,
                j + 1,
                self.dim
            )));
        }
        if tail.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: tail.dim() });
        }
        let tail = tail.with_kind(self.kind);
        if tail.is_zero() {
            self.tails.remove(&(i, j));
        } else {
            self.tails.insert((i, j), tail);
        }
        Ok(())
    }

    pub fn with_tail(mut self, i: usize, j: usize, tail: Polynomial<S>) -> Result<Self> {
        self.set_tail(i, j, tail)?;
        Ok(self)
    }

    pub fn tail(&self, i: usize, j: usize) -> Option<&Polynomial<S>> {
        self.tails.get(&(i, j))
    }

    /// The tail or zero.
    pub fn tail_or_zero(&self, i: usize, j: usize) -> Polynomial<S> {
        self.tail(i, j).cloned().unwrap_or_else(|| Polynomial::zero(self.dim, self.kind))
    }

    pub fn tails(&self) -> impl Iterator<Item = ((usize, usize), &Polynomial<S>)> {
        self.tails.iter().map(|(k, v)| (*k, v))
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PhiTable<T> {
        PhiTable {
            dim: self.dim,
            kind: self.kind,
            tails: self
                .tails
                .iter()
                .map(|(k, t)| (*k, t.map_coeffs(&f)))
                .filter(|(_, t)| !t.is_zero())
                .collect(),
        }
    }

    pub fn map_tails(&self, f: impl Fn(&Polynomial<S>) -> Result<Polynomial<S>>) -> Result<Self> {
        let mut out = Self::new(self.dim, self.kind);
        for ((i, j), t) in &self.tails {
            out.set_tail(*i, *j, f(t)?)?;
        }
        Ok(out)
    }

    /// Largest coefficient magnitude over all tails, at least 1.
    pub fn scale(&self) -> f64 {
        self.tails.values().map(|t| t.max_coeff_magnitude()).fold(1.0, f64::max)
    }
}

impl<C: Scalar> PhiTable<TruncSeries<C>> {
    /// True when every tail coefficient vanishes at `t = 0`, the condition
    /// under which formal reduction is well defined.
    pub fn starts_at_order_one(&self) -> bool {
        self.tails.values().all(|t| t.terms().values().all(|c| c.coeff(0).is_zero()))
    }
}

/// Which descent to rewrite first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Rightmost,
    Leftmost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionOptions {
    pub strategy: Strategy,
    /// Replacement budget per pair of input monomials.
    pub step_limit: u64,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        Self { strategy: Strategy::Rightmost, step_limit: DEFAULT_STEP_LIMIT }
    }
}

/// Output of [`star_by_reduction`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTrace<S: Scalar> {
    pub result: Polynomial<S>,
    /// Replacements applied (one per rewritten word per pass).
    pub reduction_count: u64,
    /// Sweeps over the pending words that rewrote something.
    pub passes: u64,
    pub max_intermediate_terms: usize,
}

fn rewrite_word<S: Scalar>(
    out: &mut NcPolynomial<S>,
    word: &NcWord,
    coeff: &S,
    p: usize,
    phi: &PhiTable<S>,
) {
    let letters = word.letters();
    let (j, i) = (letters[p], letters[p + 1]);
    out.add_term(word.splice_pair(p, &[i, j]), coeff.clone());
    if let Some(tail) = phi.tail(i as usize, j as usize) {
        for (k, c) in tail.terms() {
            out.add_term(word.splice_pair(p, k.standard_word().letters()), coeff.times(c));
        }
    }
}

/// One sweep: every word with a descent gets its rightmost (or leftmost)
/// descent rewritten. Returns the new element, whether anything changed and
/// how many words were rewritten.
pub fn reduce_once_with<S: Scalar>(
    f: &NcPolynomial<S>,
    phi: &PhiTable<S>,
    strategy: Strategy,
) -> (NcPolynomial<S>, bool, u64) {
    let mut out = NcPolynomial::zero(f.dim());
    let mut count = 0;
    for (w, c) in f.terms() {
        let pos = match strategy {
            Strategy::Rightmost => w.rightmost_descent(),
            Strategy::Leftmost => w.leftmost_descent(),
        };
        match pos {
            Some(p) => {
                count += 1;
                rewrite_word(&mut out, w, c, p, phi);
            }
            None => out.add_term(w.clone(), c.clone()),
        }
    }
    (out, count > 0, count)
}

/// [`reduce_once_with`] using the rightmost descent.
pub fn reduce_once<S: Scalar>(f: &NcPolynomial<S>, phi: &PhiTable<S>) -> (NcPolynomial<S>, bool) {
    let (out, changed, _) = reduce_once_with(f, phi, Strategy::Rightmost);
    (out, changed)
}

/// Reduces an arbitrary free-algebra element to standard form.
pub fn normal_form<S: Scalar>(
    f: &NcPolynomial<S>,
    phi: &PhiTable<S>,
    options: &ReductionOptions,
    pairs: u64,
) -> Result<ReductionTrace<S>> {
    let limit = options.step_limit.saturating_mul(pairs.max(1));
    let mut done = Polynomial::zero(phi.dim, phi.kind);
    let mut pending = NcPolynomial::zero(phi.dim);
    for (w, c) in f.terms() {
        if w.is_standard() {
            done.add_term(w.content(phi.dim), c.clone());
        } else {
            pending.add_term(w.clone(), c.clone());
        }
    }
    let mut count = 0u64;
    let mut passes = 0u64;
    let mut max_terms = pending.len();
    while !pending.is_zero() {
        let (next, _, n) = reduce_once_with(&pending, phi, options.strategy);
        count += n;
        passes += 1;
        if count > limit {
            return Err(Error::StepLimitExceeded { limit });
        }
        pending = NcPolynomial::zero(phi.dim);
        for (w, c) in next.terms() {
            if w.is_standard() {
                done.add_term(w.content(phi.dim), c.clone());
            } else {
                pending.add_term(w.clone(), c.clone());
            }
        }
        max_terms = max_terms.max(pending.len());
    }
    Ok(ReductionTrace { result: done, reduction_count: count, passes, max_intermediate_terms: max_terms })
}

fn check_operand<S: Scalar>(f: &Polynomial<S>, phi: &PhiTable<S>) -> Result<()> {
    if f.dim() != phi.dim {
        return Err(Error::DimensionMismatch { left: f.dim(), right: phi.dim });
    }
    if f.kind() != phi.kind {
        return Err(Error::KindMismatch);
    }
    Ok(())
}

/// `f ⋆ g`: concatenate the standard words of `f` and `g` and reduce.
pub fn star_by_reduction<S: Scalar>(
    f: &Polynomial<S>,
    g: &Polynomial<S>,
    phi: &PhiTable<S>,
) -> Result<ReductionTrace<S>> {
    star_by_reduction_with(f, g, phi, &ReductionOptions::default())
}

pub fn star_by_reduction_with<S: Scalar>(
    f: &Polynomial<S>,
    g: &Polynomial<S>,
    phi: &PhiTable<S>,
    options: &ReductionOptions,
) -> Result<ReductionTrace<S>> {
    check_operand(f, phi)?;
    check_operand(g, phi)?;
    let product = f.to_nc().concat_mul(&g.to_nc());
    normal_form(&product, phi, options, (f.len() * g.len()) as u64)
}

/// A differing generator triple found by [`check_overlaps`] (1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapFailure<S: Scalar> {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// `x_k ⋆ (x_j ⋆ x_i) − (x_k ⋆ x_j) ⋆ x_i`
    pub difference: Polynomial<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapReport<S: Scalar> {
    pub ok: bool,
    pub failures: Vec<OverlapFailure<S>>,
}

/// Associativity on all generator triples `i < j < k`.
pub fn check_overlaps<S: Scalar>(phi: &PhiTable<S>) -> Result<OverlapReport<S>> {
    let d = phi.dim;
    let x = |i| Polynomial::generator(d, phi.kind, i);
    let tol = FLOAT_TOLERANCE * phi.scale();
    let mut failures = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let kj = star_by_reduction(&x(k), &x(j), phi)?.result;
                let left = star_by_reduction(&kj, &x(i), phi)?.result;
                let ji = star_by_reduction(&x(j), &x(i), phi)?.result;
                let right = star_by_reduction(&x(k), &ji, phi)?.result;
                let difference = &right - &left;
                if !crate::scalar::vanishes(difference.terms().values(), tol) {
                    failures.push(OverlapFailure { i: i + 1, j: j + 1, k: k + 1, difference });
                }
            }
        }
    }
    Ok(OverlapReport { ok: failures.is_empty(), failures })
}

/// A bilinear product on commutative polynomials.
pub trait StarProduct<S: Scalar>: Sync {
    fn dim(&self) -> usize;
    fn kind(&self) -> GeneratorKind;
    fn star_monomials(&self, k: &MultiIndex, l: &MultiIndex) -> Result<Polynomial<S>>;

    fn star(&self, f: &Polynomial<S>, g: &Polynomial<S>) -> Result<Polynomial<S>> {
        let mut out = Polynomial::zero(self.dim(), self.kind());
        for (k, a) in f.terms() {
            for (l, b) in g.terms() {
                let ab = a.times(b);
                if ab.is_zero() {
                    continue;
                }
                for (m, c) in self.star_monomials(k, l)?.terms() {
                    out.add_term(m.clone(), c.times(&ab));
                }
            }
        }
        Ok(out)
    }
}

/// The reduction engine as a [`StarProduct`].
#[derive(Debug, Clone)]
pub struct ReductionStar<S: Scalar> {
    pub phi: PhiTable<S>,
    pub options: ReductionOptions,
}

impl<S: Scalar> ReductionStar<S> {
    pub fn new(phi: PhiTable<S>) -> Self {
        Self { phi, options: ReductionOptions::default() }
    }
}

impl<S: Scalar> StarProduct<S> for ReductionStar<S> {
    fn dim(&self) -> usize {
        self.phi.dim
    }
    fn kind(&self) -> GeneratorKind {
        self.phi.kind
    }
    fn star_monomials(&self, k: &MultiIndex, l: &MultiIndex) -> Result<Polynomial<S>> {
        let one = S::one();
        let f = Polynomial::monomial(self.phi.dim, self.phi.kind, k.clone(), one.clone());
        let g = Polynomial::monomial(self.phi.dim, self.phi.kind, l.clone(), one);
        Ok(star_by_reduction_with(&f, &g, &self.phi, &self.options)?.result)
    }
    fn star(&self, f: &Polynomial<S>, g: &Polynomial<S>) -> Result<Polynomial<S>> {
        Ok(star_by_reduction_with(f, g, &self.phi, &self.options)?.result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RationalQ;
    use alloc::vec;

    fn log_canonical(d: usize) -> PhiTable<RationalQ> {
        let q = RationalQ::q();
        let mut phi = PhiTable::new(d, GeneratorKind::X);
        for i in 0..d {
            for j in i + 1..d {
                let mut e = vec![0; d];
                e[i] = 1;
                e[j] = 1;
                let tail = Polynomial::monomial(d, GeneratorKind::X, MultiIndex::new(e), q.minus(&RationalQ::one()));
                phi.set_tail(i, j, tail).unwrap();
            }
        }
        phi
    }

    #[test]
    fn single_rewrites() {
        let phi = log_canonical(2);
        let w21 = NcPolynomial::word(2, NcWord(vec![1, 0]), RationalQ::one());
        let (out, changed) = reduce_once(&w21, &phi);
        assert!(changed);
        assert_eq!(out, NcPolynomial::word(2, NcWord(vec![0, 1]), RationalQ::q()));

        let w12 = NcPolynomial::word(2, NcWord(vec![0, 1]), RationalQ::one());
        let (out, changed) = reduce_once(&w12, &phi);
        assert!(!changed);
        assert_eq!(out, w12);

        let phi3 = log_canonical(3);
        let w321 = NcPolynomial::word(3, NcWord(vec![2, 1, 0]), RationalQ::one());
        let (out, _) = reduce_once(&w321, &phi3);
        assert_eq!(out, NcPolynomial::word(3, NcWord(vec![2, 0, 1]), RationalQ::q()));
    }

    #[test]
    fn three_reductions_for_the_full_reversal() {
        let phi = log_canonical(3);
        let x = |i| Polynomial::generator(3, GeneratorKind::X, i);
        let inner = star_by_reduction(&x(1), &x(0), &phi).unwrap();
        let outer = star_by_reduction(&x(2), &inner.result, &phi).unwrap();
        assert_eq!(inner.reduction_count + outer.reduction_count, 3);
        let expected = Polynomial::monomial(3, GeneratorKind::X, MultiIndex::new(vec![1, 1, 1]), RationalQ::q().pow(3));
        assert_eq!(outer.result, expected);
        let unit = star_by_reduction(&Polynomial::one(3, GeneratorKind::X), &x(2), &phi).unwrap();
        assert_eq!(unit.reduction_count, 0);
        assert_eq!(unit.result, x(2));
    }

    #[test]
    fn overlaps_for_log_canonical_and_zero() {
        assert!(check_overlaps(&log_canonical(4)).unwrap().ok);
        assert!(check_overlaps(&PhiTable::<RationalQ>::new(3, GeneratorKind::X)).unwrap().ok);
    }

    #[test]
    fn step_limit_guard() {
        let mut phi = PhiTable::new(2, GeneratorKind::X);
        let t = Polynomial::monomial(2, GeneratorKind::X, MultiIndex::new(vec![1, 1]), RationalQ::one());
        phi.set_tail(0, 1, t).unwrap();
        let x = |i| Polynomial::generator(2, GeneratorKind::X, i);
        assert!(star_by_reduction(&x(1), &x(0), &phi).is_ok());
        let options = ReductionOptions { step_limit: 2, ..Default::default() };
        let err = star_by_reduction_with(&x(1).pow(3), &x(0).pow(3), &phi, &options).unwrap_err();
        assert!(matches!(err, Error::StepLimitExceeded { .. }));
    }
}
