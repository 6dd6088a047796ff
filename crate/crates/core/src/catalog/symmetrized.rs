//! The symmetrized log-canonical product and the brute-force
//! symmetrization oracle it is checked against.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::qcomb::{multinomial_scalar, q_multinomial, root_of_unity_order};
use crate::error::{Error, Result};
use crate::linalg;
use crate::monomial::{MultiIndex, NcWord};
use crate::poly::{GeneratorKind, NcPolynomial, Polynomial};
use crate::reduction::{normal_form, star_by_reduction, PhiTable, ReductionOptions, StarProduct};
use crate::scalar::Scalar;

/// Largest monomial degree the oracle accepts for each factor.
pub const SIGMA_DEGREE_GUARD: u32 = 6;

/// `T(x^K) = [K]_q / [K] · x^K` (q-multinomial over multinomial).
pub fn t_factor<S: Scalar>(k: &MultiIndex, q: &S) -> Result<S> {
    q_multinomial(k, q)
        .div(&multinomial_scalar::<S>(k))
        .ok_or(Error::NotInvertible)
}

fn pole<S: Scalar>(q: &S, degree: u32) -> Error {
    match root_of_unity_order(q, degree) {
        Some(order) => Error::PoleAtRootOfUnity { order },
        None => Error::NotInvertible,
    }
}

/// Direction of the equivalence map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Diagonal rescaling by [`t_factor`] or its inverse.
pub fn equivalence_t<S: Scalar>(f: &Polynomial<S>, q: &S, direction: Direction) -> Result<Polynomial<S>> {
    let mut out = Polynomial::zero(f.dim(), f.kind());
    for (k, c) in f.terms() {
        let t = t_factor(k, q)?;
        let factor = match direction {
            Direction::Forward => t,
            Direction::Inverse => t.inv().ok_or_else(|| pole(q, k.degree()))?,
        };
        out.add_term(k.clone(), c.times(&factor));
    }
    Ok(out)
}

/// `x^K ⋆̂ x^L = [K+L]/([K][L]) · [K]_q [L]_q / [K+L]_q · q^{Σ_{i<j} K_j L_i} x^{K+L}`.
pub fn symmetrized_star<S: Scalar>(k: &MultiIndex, l: &MultiIndex, q: &S) -> Result<Polynomial<S>> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch { left: k.dim(), right: l.dim() });
    }
    let kl = k.add(l);
    let denominator = q_multinomial(&kl, q);
    if denominator.is_zero() {
        return Err(pole(q, kl.degree()));
    }
    let classical = multinomial_scalar::<S>(&kl)
        .div(&multinomial_scalar::<S>(k).times(&multinomial_scalar::<S>(l)))
        .ok_or(Error::NotInvertible)?;
    let quantum = q_multinomial(k, q)
        .times(&q_multinomial(l, q))
        .div(&denominator)
        .ok_or_else(|| pole(q, kl.degree()))?;
    let coeff = classical.times(&quantum).times(&q.pow(k.crossing(l)));
    Ok(Polynomial::monomial(k.dim(), GeneratorKind::X, kl, coeff))
}

/// Closed-form handle for the symmetrized product.
#[derive(Debug, Clone)]
pub struct SymmetrizedLogCanonical<S: Scalar> {
    pub dim: usize,
    pub q: S,
}

impl<S: Scalar> StarProduct<S> for SymmetrizedLogCanonical<S> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn kind(&self) -> GeneratorKind {
        GeneratorKind::X
    }
    fn star_monomials(&self, k: &MultiIndex, l: &MultiIndex) -> Result<Polynomial<S>> {
        symmetrized_star(k, l, &self.q)
    }
}

/// Distinct rearrangements of the letters of `x^K`.
fn arrangements(k: &MultiIndex) -> Vec<NcWord> {
    let mut out = Vec::new();
    let mut counts: Vec<u32> = k.exponents().to_vec();
    let mut word = Vec::with_capacity(k.degree() as usize);
    fn go(counts: &mut [u32], word: &mut Vec<u16>, total: usize, out: &mut Vec<NcWord>) {
        if word.len() == total {
            out.push(NcWord(word.clone()));
            return;
        }
        for i in 0..counts.len() {
            if counts[i] > 0 {
                counts[i] -= 1;
                word.push(i as u16);
                go(counts, word, total, out);
                word.pop();
                counts[i] += 1;
            }
        }
    }
    go(&mut counts, &mut word, k.degree() as usize, &mut out);
    out
}

/// Symmetrization `σ`, computed by averaging reduced rearrangements and
/// remembered per monomial.
struct Sigma<'a, S: Scalar> {
    phi: &'a PhiTable<S>,
    options: ReductionOptions,
    memo: BTreeMap<MultiIndex, Polynomial<S>>,
}

impl<S: Scalar> Sigma<'_, S> {
    fn image(&mut self, k: &MultiIndex) -> Result<Polynomial<S>> {
        if let Some(p) = self.memo.get(k) {
            return Ok(p.clone());
        }
        let words = arrangements(k);
        let mut sum = NcPolynomial::zero(self.phi.dim());
        for w in words {
            sum.add_term(w, S::one());
        }
        let reduced = normal_form(&sum, self.phi, &self.options, 1)?.result;
        let inv = multinomial_scalar::<S>(k).inv().ok_or(Error::NotInvertible)?;
        let image = reduced.scale(&inv);
        if image.max_degree().unwrap_or(0) > k.degree() {
            return Err(Error::SigmaNotInvertible(format!(
                "symmetrization raises the degree of x^{k}; no degreewise inverse"
            )));
        }
        self.memo.insert(k.clone(), image.clone());
        Ok(image)
    }

    fn apply(&mut self, f: &Polynomial<S>) -> Result<Polynomial<S>> {
        let mut out = Polynomial::zero(f.dim(), f.kind());
        for (k, c) in f.terms() {
            out = &out + &self.image(k)?.scale(c);
        }
        Ok(out)
    }

    /// Solves `σ(a) = target`, top degree first.
    fn invert(&mut self, target: &Polynomial<S>) -> Result<Polynomial<S>> {
        let tol = crate::reduction::FLOAT_TOLERANCE * target.max_coeff_magnitude().max(1.0);
        let mut remaining = target.clone();
        let mut result = Polynomial::zero(target.dim(), target.kind());
        while let Some(top) = remaining.max_degree() {
            // Close the block of degree-`top` monomials under σ.
            let mut block: BTreeSet<MultiIndex> =
                remaining.terms().keys().filter(|k| k.degree() == top).cloned().collect();
            let mut frontier: Vec<MultiIndex> = block.iter().cloned().collect();
            while let Some(k) = frontier.pop() {
                for m in self.image(&k)?.terms().keys() {
                    if m.degree() == top && block.insert(m.clone()) {
                        frontier.push(m.clone());
                    }
                }
            }
            let basis: Vec<MultiIndex> = block.into_iter().collect();
            let mut matrix = Vec::with_capacity(basis.len());
            for row in &basis {
                let mut r = Vec::with_capacity(basis.len());
                for col in &basis {
                    r.push(self.image(col)?.coeff(row));
                }
                matrix.push(r);
            }
            let rhs: Vec<S> = basis.iter().map(|m| remaining.coeff(m)).collect();
            let solution = linalg::solve(matrix, rhs).ok_or_else(|| {
                Error::SigmaNotInvertible(format!("singular degree-{top} block of size {}", basis.len()))
            })?;
            for (k, a) in basis.iter().zip(solution) {
                if a.is_zero() {
                    continue;
                }
                remaining = &remaining - &self.image(k)?.scale(&a);
                result.add_term(k.clone(), a);
            }
            // Anything left in degree `top` is roundoff (float rings only).
            let leftover = remaining.homogeneous_part(top);
            if !leftover.is_zero() {
                if S::EXACT || leftover.max_coeff_magnitude() > tol {
                    return Err(Error::SigmaNotInvertible(format!("degree-{top} residual did not cancel")));
                }
                remaining = &remaining - &leftover;
            }
        }
        Ok(result)
    }
}

/// `σ⁻¹(σ(x^K) · σ(x^L))` by brute force: `σ(x^K)` is the average over
/// all rearrangements of the word, reduced with `phi`.
pub fn sigma_oracle_star<S: Scalar>(k: &MultiIndex, l: &MultiIndex, phi: &PhiTable<S>) -> Result<Polynomial<S>> {
    if k.degree() > SIGMA_DEGREE_GUARD || l.degree() > SIGMA_DEGREE_GUARD {
        return Err(Error::SizeGuard(format!(
            "symmetrization oracle limited to degree {SIGMA_DEGREE_GUARD} factors"
        )));
    }
    let mut sigma = Sigma { phi, options: ReductionOptions::default(), memo: BTreeMap::new() };
    let one = S::one();
    let sk = sigma.apply(&Polynomial::monomial(phi.dim(), phi.kind(), k.clone(), one.clone()))?;
    let sl = sigma.apply(&Polynomial::monomial(phi.dim(), phi.kind(), l.clone(), one))?;
    let product = star_by_reduction(&sk, &sl, phi)?.result;
    sigma.invert(&product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::logcanonical::log_canonical_table;
    use crate::scalar::{CRational, RationalQ};
    use alloc::vec;

    #[test]
    fn generator_coefficients() {
        let q = RationalQ::q();
        let one = RationalQ::one();
        let two = RationalQ::from_i64(2);
        let x1 = MultiIndex::new(vec![1, 0]);
        let x2 = MultiIndex::new(vec![0, 1]);
        let x12 = MultiIndex::new(vec![1, 1]);
        let a = symmetrized_star(&x1, &x2, &q).unwrap();
        assert_eq!(a.coeff(&x12), two.div(&one.plus(&q)).unwrap());
        let b = symmetrized_star(&x2, &x1, &q).unwrap();
        assert_eq!(b.coeff(&x12), two.times(&q).div(&one.plus(&q)).unwrap());
        let unit = symmetrized_star(&x12, &MultiIndex::zero(2), &q).unwrap();
        assert_eq!(unit.coeff(&x12), one);
    }

    #[test]
    fn t_map_examples() {
        let q = RationalQ::q();
        let x1 = Polynomial::generator(2, GeneratorKind::X, 0);
        assert_eq!(equivalence_t(&x1, &q, Direction::Forward).unwrap(), x1);
        let x12 = Polynomial::<RationalQ>::monomial(2, GeneratorKind::X, MultiIndex::new(vec![1, 1]), RationalQ::one());
        let half = RationalQ::from_crational(&CRational::ratio(1, 2));
        let expected = x12.scale(&q.plus(&RationalQ::one()).times(&half));
        assert_eq!(equivalence_t(&x12, &q, Direction::Forward).unwrap(), expected);
    }

    #[test]
    fn oracle_agrees_on_generators() {
        let q = RationalQ::q();
        let phi = log_canonical_table(2, GeneratorKind::X, &q);
        let x1 = MultiIndex::new(vec![1, 0]);
        let x2 = MultiIndex::new(vec![0, 1]);
        assert_eq!(sigma_oracle_star(&x1, &x2, &phi).unwrap(), symmetrized_star(&x1, &x2, &q).unwrap());
        let zero = MultiIndex::zero(2);
        assert_eq!(
            sigma_oracle_star(&zero, &x2, &phi).unwrap(),
            Polynomial::generator(2, GeneratorKind::X, 1)
        );
    }

    #[test]
    fn pole_reports_root_order() {
        let q = CRational::from_i64(-1);
        let x1 = MultiIndex::new(vec![1, 0]);
        let x2 = MultiIndex::new(vec![0, 1]);
        assert_eq!(symmetrized_star(&x1, &x2, &q), Err(Error::PoleAtRootOfUnity { order: 2 }));
    }

    #[test]
    fn commutative_limit() {
        let q = CRational::one();
        let phi = log_canonical_table(3, GeneratorKind::X, &q);
        let k = MultiIndex::new(vec![1, 2, 0]);
        let l = MultiIndex::new(vec![0, 1, 1]);
        let expected = Polynomial::monomial(3, GeneratorKind::X, k.add(&l), CRational::one());
        assert_eq!(sigma_oracle_star(&k, &l, &phi).unwrap(), expected);
    }
}
