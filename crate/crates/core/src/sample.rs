//! Seeded random inputs for the property suites and probes.
//!
//! Everything draws from a [`ChaCha8Rng`] so a seed pins the whole stream
//! on every platform.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

use crate::monomial::MultiIndex;
use crate::poly::{GeneratorKind, Polynomial};
use crate::scalar::{CRational, Complex64, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Scalars with a sampling distribution.
pub trait Sample: Scalar {
    fn sample(rng: &mut ChaCha8Rng) -> Self;
}

/// Small Gaussian rationals `(a + b i)/c` with `|a|, |b| ≤ 3`, `c ≤ 3`.
impl Sample for CRational {
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        let den = BigInt::from(rng.random_range(1..=3i64));
        let re = BigRational::new(BigInt::from(rng.random_range(-3..=3i64)), den.clone());
        let im = if rng.random_bool(0.5) {
            BigRational::new(BigInt::from(rng.random_range(-3..=3i64)), den)
        } else {
            BigRational::from_integer(BigInt::from(0))
        };
        CRational::new(re, im)
    }
}

/// Uniform on the unit square `[-1, 1] + [-1, 1] i`.
impl Sample for Complex64 {
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    }
}

pub fn multi_index(rng: &mut ChaCha8Rng, dim: usize, degree: u32) -> MultiIndex {
    let mut e = alloc::vec![0u32; dim];
    for _ in 0..degree {
        e[rng.random_range(0..dim)] += 1;
    }
    MultiIndex::new(e)
}

/// A polynomial with at most `max_terms` terms of degree `≤ max_degree`.
/// Never returns zero unless `max_terms` is zero.
pub fn polynomial<S: Sample>(
    rng: &mut ChaCha8Rng,
    dim: usize,
    kind: GeneratorKind,
    max_degree: u32,
    max_terms: usize,
) -> Polynomial<S> {
    let mut f = Polynomial::zero(dim, kind);
    let terms = if max_terms == 0 { 0 } else { rng.random_range(1..=max_terms) };
    for _ in 0..terms {
        let degree = rng.random_range(0..=max_degree);
        let k = multi_index(rng, dim, degree);
        f.add_term(k, nonzero(rng));
    }
    if f.is_zero() && max_terms > 0 {
        return polynomial(rng, dim, kind, max_degree, max_terms);
    }
    f
}

/// A nonzero homogeneous polynomial of the given degree.
pub fn homogeneous<S: Sample>(
    rng: &mut ChaCha8Rng,
    dim: usize,
    kind: GeneratorKind,
    degree: u32,
    max_terms: usize,
) -> Polynomial<S> {
    let mut f = Polynomial::zero(dim, kind);
    while f.is_zero() {
        for _ in 0..rng.random_range(1..=max_terms.max(1)) {
            f.add_term(multi_index(rng, dim, degree), nonzero(rng));
        }
    }
    f
}

fn nonzero<S: Sample>(rng: &mut ChaCha8Rng) -> S {
    loop {
        let c = S::sample(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// `count` independent pairs from [`polynomial`].
pub fn polynomial_pairs<S: Sample>(
    rng: &mut ChaCha8Rng,
    count: usize,
    dim: usize,
    kind: GeneratorKind,
    max_degree: u32,
    max_terms: usize,
) -> Vec<(Polynomial<S>, Polynomial<S>)> {
    (0..count)
        .map(|_| {
            let f = polynomial(rng, dim, kind, max_degree, max_terms);
            let g = polynomial(rng, dim, kind, max_degree, max_terms);
            (f, g)
        })
        .collect()
}
