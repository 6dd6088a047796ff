//! The three-generator family with the non-quadratic relation
//! `z y = q y z + (p − 1) x^N`, and the two-generator quantum Weyl algebra
//! obtained at `N = 0`, `r = 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monomial::MultiIndex;
use crate::poly::{GeneratorKind, Polynomial};
use crate::reduction::{PhiTable, StarProduct};
use crate::scalar::Scalar;

/// A word over {0,1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WordZeroOne {
    pub bits: Vec<bool>,
}

impl WordZeroOne {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `|w|`, the number of ones.
    pub fn ones(&self) -> u32 {
        self.bits.iter().filter(|&&b| b).count() as u32
    }

    /// `|w_{1..i}|`.
    pub fn prefix_ones(&self, i: usize) -> u32 {
        self.bits[..i].iter().filter(|&&b| b).count() as u32
    }

    /// All words of length `k` with at most `m` ones, lexicographically.
    pub fn enumerate(k: usize, m: u32) -> Vec<WordZeroOne> {
        let mut out = Vec::new();
        let mut bits = Vec::with_capacity(k);
        fn go(k: usize, m: u32, ones: u32, bits: &mut Vec<bool>, out: &mut Vec<WordZeroOne>) {
            if bits.len() == k {
                out.push(WordZeroOne::new(bits.clone()));
                return;
            }
            bits.push(false);
            go(k, m, ones, bits, out);
            bits.pop();
            if ones < m {
                bits.push(true);
                go(k, m, ones + 1, bits, out);
                bits.pop();
            }
        }
        go(k, m, 0, &mut bits, &mut out);
        out
    }
}

/// Parameters `(p, q, r, N)` of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct NonquadraticParams<S: Scalar> {
    pub p: S,
    pub q: S,
    pub r: S,
    pub n: u32,
}

/// `λ̃_m(w, 0) = q^{m−|w|}` and `λ̃_m(w, 1) = (p − 1) Σ_{j<m−|w|} (q r^N)^j`.
pub fn lambda_tilde<S: Scalar>(m: u32, prefix: &WordZeroOne, bit: bool, params: &NonquadraticParams<S>) -> S {
    lambda_tilde_at(m, prefix.ones(), bit, params)
}

fn lambda_tilde_at<S: Scalar>(m: u32, ones: u32, bit: bool, params: &NonquadraticParams<S>) -> S {
    let rest = m.saturating_sub(ones);
    if !bit {
        return params.q.pow(rest as u64);
    }
    let ratio = params.q.times(&params.r.pow(params.n as u64));
    let mut acc = S::zero();
    let mut power = S::one();
    for _ in 0..rest {
        acc = acc.plus(&power);
        power = power.times(&ratio);
    }
    params.p.minus(&S::one()).times(&acc)
}

/// `λ_m(w) = Π_i r^{−N |w_{1..i−1}|} λ̃_m(w_{1..i−1}, w_i)`, with
/// `λ_m(∅) = 1`. Needs `r` invertible when `N > 0`.
pub fn lambda_m<S: Scalar>(m: u32, w: &WordZeroOne, params: &NonquadraticParams<S>) -> Result<S> {
    let mut acc = S::one();
    for i in 0..w.len() {
        let c = w.prefix_ones(i);
        let shift = params.r.powi(-((params.n * c) as i64)).ok_or(Error::NotInvertible)?;
        acc = acc.times(&shift).times(&lambda_tilde_at(m, c, w.bits[i], params));
    }
    Ok(acc)
}

/// `x^i y^j z^k ⋆ x^ℓ y^m z^n` as the sum over words `w ∈ {0,1}^k` with
/// `|w| ≤ m` of `r^{(j−k)ℓ + jN|w|} λ_m(w) x^{i+ℓ+N|w|} y^{j+m−|w|} z^{k+n−|w|}`.
///
/// Returned as `(exponents, coefficient)` pairs, merged by exponent.
pub fn nonquadratic_terms<S: Scalar>(
    e1: [u32; 3],
    e2: [u32; 3],
    params: &NonquadraticParams<S>,
) -> Result<Vec<([u32; 3], S)>> {
    let [i, j, k] = e1;
    let [l, m, n] = e2;
    // Sum of λ_m(w) over words with a given number of ones; built by a
    // depth-first walk that stops as soon as a prefix exceeds m ones.
    let mut by_ones = vec![S::zero(); (m.min(k) + 1) as usize];
    let r_inv_n = if params.n > 0 && k > 1 && m > 0 {
        Some(params.r.inv().ok_or(Error::NotInvertible)?.pow(params.n as u64))
    } else {
        None
    };
    let mut stack: Vec<(u32, u32, S)> = vec![(0, 0, S::one())];
    while let Some((pos, ones, acc)) = stack.pop() {
        if acc.is_zero() {
            continue;
        }
        if pos == k {
            by_ones[ones as usize] = by_ones[ones as usize].plus(&acc);
            continue;
        }
        let shift = match (&r_inv_n, ones) {
            (_, 0) => S::one(),
            (Some(ri), c) => ri.pow(c as u64),
            (None, _) => S::one(),
        };
        let base = acc.times(&shift);
        if ones < m {
            stack.push((pos + 1, ones + 1, base.times(&lambda_tilde_at(m, ones, true, params))));
        }
        stack.push((pos + 1, ones, base.times(&lambda_tilde_at(m, ones, false, params))));
    }
    let mut out: Vec<([u32; 3], S)> = Vec::new();
    for (w, lam) in by_ones.into_iter().enumerate() {
        if lam.is_zero() {
            continue;
        }
        let w = w as u32;
        let r_exp = (j as i64 - k as i64) * l as i64 + (j * params.n * w) as i64;
        let coeff = params.r.powi(r_exp).ok_or(Error::NotInvertible)?.times(&lam);
        let exps = [i + l + params.n * w, j + m - w, k + n - w];
        match out.iter_mut().find(|(e, _)| *e == exps) {
            Some((_, c)) => *c = c.plus(&coeff),
            None => out.push((exps, coeff)),
        }
    }
    Ok(out)
}

/// [`nonquadratic_terms`] as a polynomial in `x1, x2, x3 = x, y, z`.
pub fn nonquadratic_star<S: Scalar>(
    e1: [u32; 3],
    e2: [u32; 3],
    params: &NonquadraticParams<S>,
) -> Result<Polynomial<S>> {
    let terms = nonquadratic_terms(e1, e2, params)?;
    Ok(Polynomial::from_terms(3, GeneratorKind::X, terms.into_iter().map(|(e, c)| (MultiIndex::new(e.to_vec()), c))))
}

/// Tails `φ(yx) = (r−1)xy`, `φ(zx) = (s−1)xz`, `φ(zy) = (q−1)yz + (p−1)x^N`.
/// Associativity needs `s = r⁻¹` (unless `p = 1`).
pub fn nonquadratic_table<S: Scalar>(params: &NonquadraticParams<S>, s: &S) -> PhiTable<S> {
    let one = S::one();
    let mono = |e: [u32; 3], c: S| Polynomial::monomial(3, GeneratorKind::X, MultiIndex::new(e.to_vec()), c);
    let mut zy = mono([0, 1, 1], params.q.minus(&one));
    zy.add_term(MultiIndex::new(vec![params.n, 0, 0]), params.p.minus(&one));
    PhiTable::new(3, GeneratorKind::X)
        .with_tail(0, 1, mono([1, 1, 0], params.r.minus(&one)))
        .and_then(|t| t.with_tail(0, 2, mono([1, 0, 1], s.minus(&one))))
        .and_then(|t| t.with_tail(1, 2, zy))
        .expect("valid pairs")
}

/// Closed-form handle for the three-generator family.
#[derive(Debug, Clone)]
pub struct Nonquadratic<S: Scalar> {
    pub params: NonquadraticParams<S>,
}

fn triple(k: &MultiIndex) -> Result<[u32; 3]> {
    match k.exponents() {
        [a, b, c] => Ok([*a, *b, *c]),
        _ => Err(Error::DimensionMismatch { left: 3, right: k.dim() }),
    }
}

impl<S: Scalar> StarProduct<S> for Nonquadratic<S> {
    fn dim(&self) -> usize {
        3
    }
    fn kind(&self) -> GeneratorKind {
        GeneratorKind::X
    }
    fn star_monomials(&self, k: &MultiIndex, l: &MultiIndex) -> Result<Polynomial<S>> {
        nonquadratic_star(triple(k)?, triple(l)?, &self.params)
    }
}

/// `y^j z^k ⋆ y^m z^n` in the algebra `⟨y, z⟩ / (zy − q yz − (p − 1))`.
///
/// Generators are `x1 = y`, `x2 = z`.
pub fn quantum_weyl_star<S: Scalar>(e1: [u32; 2], e2: [u32; 2], p: &S, q: &S) -> Result<Polynomial<S>> {
    let params = NonquadraticParams { p: p.clone(), q: q.clone(), r: S::one(), n: 0 };
    let terms = nonquadratic_terms([0, e1[0], e1[1]], [0, e2[0], e2[1]], &params)?;
    Ok(Polynomial::from_terms(
        2,
        GeneratorKind::X,
        terms.into_iter().map(|(e, c)| (MultiIndex::new(vec![e[1], e[2]]), c)),
    ))
}

/// The single tail `φ(zy) = (q − 1) yz + (p − 1)`.
pub fn quantum_weyl_table<S: Scalar>(p: &S, q: &S) -> PhiTable<S> {
    let one = S::one();
    let mut tail = Polynomial::monomial(2, GeneratorKind::X, MultiIndex::new(vec![1, 1]), q.minus(&one));
    tail.add_term(MultiIndex::zero(2), p.minus(&one));
    PhiTable::new(2, GeneratorKind::X).with_tail(0, 1, tail).expect("valid pair")
}

/// Closed-form handle for the quantum Weyl algebra.
#[derive(Debug, Clone)]
pub struct QuantumWeyl<S: Scalar> {
    pub p: S,
    pub q: S,
}

impl<S: Scalar> StarProduct<S> for QuantumWeyl<S> {
    fn dim(&self) -> usize {
        2
    }
    fn kind(&self) -> GeneratorKind {
        GeneratorKind::X
    }
    fn star_monomials(&self, k: &MultiIndex, l: &MultiIndex) -> Result<Polynomial<S>> {
        let pair = |m: &MultiIndex| match m.exponents() {
            [a, b] => Ok([*a, *b]),
            _ => Err(Error::DimensionMismatch { left: 2, right: m.dim() }),
        };
        quantum_weyl_star(pair(k)?, pair(l)?, &self.p, &self.q)
    }
}
