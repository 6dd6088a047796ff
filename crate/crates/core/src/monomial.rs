//! Commutative exponent vectors and noncommutative words.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Exponent vector `K` of the monomial `x^K = x_1^{K_1} ... x_d^{K_d}`.
///
/// Ordered by total degree, then lexicographically with larger leading
/// exponents first, so `1 < x1 < x2 < x1^2 < x1*x2 < x2^2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    /// # Panics
    /// If `exponents` is empty.
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty(), "dimension must be at least 1");
        Self(exponents)
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![0; dim])
    }

    /// The exponent of the generator with 0-based index `i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::new(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other` when it stays non-negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    /// `K∨ = (K_d, ..., K_1)`.
    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn with(&self, i: usize, value: u32) -> Self {
        let mut e = self.0.clone();
        e[i] = value;
        Self(e)
    }

    /// The standard (non-decreasing) word with this content.
    pub fn standard_word(&self) -> NcWord {
        let mut letters = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.0.iter().enumerate() {
            letters.extend(core::iter::repeat_n(i as u16, e as usize));
        }
        NcWord(letters)
    }

    /// `Σ_{i<j} K_j L_i`, the number of swaps needed to sort `x^K x^L`.
    pub fn crossing(&self, other: &Self) -> u64 {
        let mut total = 0u64;
        let mut prefix = 0u64;
        for j in 0..self.dim() {
            total += self.0[j] as u64 * prefix;
            prefix += other.0[j] as u64;
        }
        total
    }

    /// Every exponent vector of total degree exactly `degree`, ascending.
    pub fn all_of_degree(dim: usize, degree: u32) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current = vec![0; dim];
        fill(&mut current, 0, degree, &mut out);
        out.sort();
        out
    }

    /// Every exponent vector with `|K| ≤ max_degree`, in ascending order.
    pub fn all_up_to(dim: usize, max_degree: u32) -> Vec<Self> {
        (0..=max_degree).flat_map(|n| Self::all_of_degree(dim, n)).collect()
    }

    /// `Σ_{i<j} K_i K_j`.
    pub fn pair_sum(&self) -> u64 {
        let mut total = 0u64;
        let mut prefix = 0u64;
        for &e in &self.0 {
            total += e as u64 * prefix;
            prefix += e as u64;
        }
        total
    }
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for e in 0..=remaining {
        current[pos] = e;
        fill(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A word in the free algebra; letters are 0-based generator indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NcWord(pub Vec<u16>);

impl NcWord {
    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Letters non-decreasing.
    pub fn is_standard(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Position `p` of the rightmost adjacent descent `letters[p] > letters[p+1]`.
    pub fn rightmost_descent(&self) -> Option<usize> {
        (0..self.0.len().saturating_sub(1)).rev().find(|&p| self.0[p] > self.0[p + 1])
    }

    pub fn leftmost_descent(&self) -> Option<usize> {
        (0..self.0.len().saturating_sub(1)).find(|&p| self.0[p] > self.0[p + 1])
    }

    pub fn content(&self, dim: usize) -> MultiIndex {
        let mut e = vec![0u32; dim];
        for &l in &self.0 {
            e[l as usize] += 1;
        }
        MultiIndex::new(e)
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Self(letters)
    }

    /// Replaces the two letters at `p, p+1` by `middle`.
    pub fn splice_pair(&self, p: usize, middle: &[u16]) -> Self {
        let mut letters = Vec::with_capacity(self.0.len() + middle.len());
        letters.extend_from_slice(&self.0[..p]);
        letters.extend_from_slice(middle);
        letters.extend_from_slice(&self.0[p + 2..]);
        Self(letters)
    }
}

impl fmt::Debug for NcWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l + 1)?;
        }
        f.write_str("]")
    }
}
