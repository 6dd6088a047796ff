//! Log-canonical products `x^K ⋆ x^L = q^{Σ_{i<j} K_j L_i} x^{K+L}` and
//! their Wick-coordinate twin.

use crate::error::{Error, Result};
use crate::monomial::MultiIndex;
use crate::poly::{GeneratorKind, Polynomial};
use crate::reduction::{PhiTable, StarProduct};
use crate::scalar::{vanishes, Scalar};

/// Closed form on real-type coordinates.
pub fn log_canonical_star<S: Scalar>(k: &MultiIndex, l: &MultiIndex, q: &S) -> Result<Polynomial<S>> {
    monomial_product(k, l, q, GeneratorKind::X)
}

/// Closed form on Wick coordinates (same exponent rule).
pub fn wick_star<S: Scalar>(k: &MultiIndex, l: &MultiIndex, q: &S) -> Result<Polynomial<S>> {
    monomial_product(k, l, q, GeneratorKind::W)
}

fn monomial_product<S: Scalar>(k: &MultiIndex, l: &MultiIndex, q: &S, kind: GeneratorKind) -> Result<Polynomial<S>> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch { left: k.dim(), right: l.dim() });
    }
    Ok(Polynomial::monomial(k.dim(), kind, k.add(l), q.pow(k.crossing(l))))
}

/// Tails `φ(x_j x_i) = (q − 1) x_i x_j` for all `i < j`.
pub fn log_canonical_table<S: Scalar>(dim: usize, kind: GeneratorKind, q: &S) -> PhiTable<S> {
    let mut phi = PhiTable::new(dim, kind);
    let c = q.minus(&S::one());
    for i in 0..dim {
        for j in i + 1..dim {
            let e = MultiIndex::unit(dim, i).add(&MultiIndex::unit(dim, j));
            phi.set_tail(i, j, Polynomial::monomial(dim, kind, e, c.clone())).expect("valid pair");
        }
    }
    phi
}

/// The closed form as a product handle.
#[derive(Debug, Clone)]
pub struct LogCanonical<S: Scalar> {
    pub dim: usize,
    pub kind: GeneratorKind,
    pub q: S,
}

impl<S: Scalar> StarProduct<S> for LogCanonical<S> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn kind(&self) -> GeneratorKind {
        self.kind
    }
    fn star_monomials(&self, k: &MultiIndex, l: &MultiIndex) -> Result<Polynomial<S>> {
        monomial_product(k, l, &self.q, self.kind)
    }
}

/// Checks `φ(w_j w_i)* = φ(w_{d−i+1} w_{d−j+1})` for every `i < j`, with `*`
/// the Wick involution (conjugate coefficients, reverse exponents).
pub fn wick_involution_condition<S: Scalar>(phi: &PhiTable<S>) -> Result<bool> {
    if phi.kind() != GeneratorKind::W {
        return Err(Error::KindMismatch);
    }
    let d = phi.dim();
    let tol = crate::reduction::FLOAT_TOLERANCE * phi.scale();
    for i in 0..d {
        for j in i + 1..d {
            let lhs = phi.tail_or_zero(i, j).conjugate();
            let rhs = phi.tail_or_zero(d - 1 - j, d - 1 - i);
            if !vanishes((&lhs - &rhs).terms().values(), tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{CRational, TruncSeries};
    use alloc::vec;

    #[test]
    fn closed_form_examples() {
        let q = CRational::ratio(3, 2);
        let p = log_canonical_star(&MultiIndex::new(vec![0, 1]), &MultiIndex::new(vec![1, 0]), &q).unwrap();
        assert_eq!(p.coeff(&MultiIndex::new(vec![1, 1])), q);
        let k = MultiIndex::new(vec![0, 1, 1]);
        let l = MultiIndex::new(vec![1, 1, 0]);
        let p = log_canonical_star(&k, &l, &q).unwrap();
        assert_eq!(p.coeff(&MultiIndex::new(vec![1, 2, 1])), q.pow(3));
        let unit = log_canonical_star(&k, &MultiIndex::zero(3), &q).unwrap();
        assert_eq!(unit.coeff(&k), CRational::one());
    }

    #[test]
    fn involution_condition() {
        type T = TruncSeries<CRational>;
        let real_q = T::new(vec![CRational::one(), CRational::from_i64(-1)], 4);
        assert!(wick_involution_condition(&log_canonical_table(3, GeneratorKind::W, &real_q)).unwrap());
        let complex_q = T::new(vec![CRational::one(), CRational::from_i64(-1), CRational::i()], 4);
        assert!(!wick_involution_condition(&log_canonical_table(3, GeneratorKind::W, &complex_q)).unwrap());
        assert!(wick_involution_condition(&PhiTable::<T>::new(3, GeneratorKind::W)).unwrap());
    }
}
