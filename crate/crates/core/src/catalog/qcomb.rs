//! q-integers, q-factorials and q-multinomial coefficients.

use alloc::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::monomial::MultiIndex;
use crate::scalar::{CRational, Scalar};

/// `[n]_q = 1 + q + ... + q^{n−1}`.
pub fn q_integer<S: Scalar>(n: u32, q: &S) -> S {
    let mut acc = S::zero();
    let mut power = S::one();
    for _ in 0..n {
        acc = acc.plus(&power);
        power = power.times(q);
    }
    acc
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial<S: Scalar>(n: u32, q: &S) -> S {
    (1..=n).fold(S::one(), |acc, k| acc.times(&q_integer(k, q)))
}

/// The q-multinomial of `K`, computed by the shuffle recurrence
/// `[K]_q = Σ_{i: K_i > 0} q^{K_1 + ... + K_{i−1}} [K − e_i]_q`.
///
/// No division is involved, so this is exact at roots of unity.
pub fn q_multinomial<S: Scalar>(k: &MultiIndex, q: &S) -> S {
    let mut memo = BTreeMap::new();
    q_multinomial_memo(k, q, &mut memo)
}

fn q_multinomial_memo<S: Scalar>(k: &MultiIndex, q: &S, memo: &mut BTreeMap<MultiIndex, S>) -> S {
    let nonzero = k.exponents().iter().filter(|&&e| e > 0).count();
    if nonzero <= 1 {
        return S::one();
    }
    if let Some(v) = memo.get(k) {
        return v.clone();
    }
    let mut acc = S::zero();
    let mut prefix = 0u64;
    for i in 0..k.dim() {
        let e = k.get(i);
        if e > 0 {
            let sub = q_multinomial_memo(&k.with(i, e - 1), q, memo);
            acc = acc.plus(&q.pow(prefix).times(&sub));
        }
        prefix += e as u64;
    }
    memo.insert(k.clone(), acc.clone());
    acc
}

/// The same coefficient as `[|K|]_q! / Π [K_i]_q!`; `None` when a
/// denominator vanishes.
pub fn q_multinomial_by_factorials<S: Scalar>(k: &MultiIndex, q: &S) -> Option<S> {
    let num = q_factorial(k.degree(), q);
    let den = k.exponents().iter().fold(S::one(), |acc, &e| acc.times(&q_factorial(e, q)));
    num.div(&den)
}

/// Ordinary multinomial `|K|! / Π K_i!`, exactly.
pub fn multinomial(k: &MultiIndex) -> BigInt {
    let mut acc = BigInt::one();
    let mut n = 0u64;
    for &e in k.exponents() {
        for j in 1..=e as u64 {
            n += 1;
            acc = acc * BigInt::from(n) / BigInt::from(j);
        }
    }
    acc
}

pub(crate) fn multinomial_scalar<S: Scalar>(k: &MultiIndex) -> S {
    S::from_crational(&CRational::real(BigRational::from_integer(multinomial(k))))
}

/// Smallest `n` in `2..=max_n` with `q^n = 1` (within `1e-12` for floats).
pub fn root_of_unity_order<S: Scalar>(q: &S, max_n: u32) -> Option<u32> {
    let mut power = q.clone();
    for n in 2..=max_n.max(2) {
        power = power.times(q);
        let diff = power.minus(&S::one());
        let hit = if S::EXACT { diff.is_zero() } else { diff.magnitude() < 1e-12 };
        if hit {
            return Some(n);
        }
    }
    None
}
