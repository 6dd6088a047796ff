//! Coefficient rings.
//!
//! Four realizations share the [`Scalar`] interface: exact complex rationals,
//! double-precision complex numbers, truncated power series in the formal
//! parameter `t`, and rational functions in an indeterminate `q`.

mod complex;
mod crational;
mod ratq;
mod series;

use alloc::string::String;
use core::fmt;

pub use complex::{format_sig, Complex64, FLOAT_ZERO_THRESHOLD};
pub use crational::{parse_decimal, CRational};
pub use ratq::{RationalQ, UPoly};
pub use series::{TruncSeries, DEFAULT_TRUNCATION};

/// A commutative ring with an involutive conjugation.
///
/// Arithmetic takes references so that big-number realizations avoid
/// needless clones. `inv` returns `None` for non-units.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True for rings where equality is exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Complex conjugation; fixes `t` and `q`.
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_crational(c: &CRational) -> Self;
    /// Rough size used for tolerances and reports.
    fn magnitude(&self) -> f64;
    /// Text for a coefficient; `full` requests round-trip precision.
    fn coeff_text(&self, full: bool) -> CoeffText;

    fn from_i64(n: i64) -> Self {
        Self::from_crational(&CRational::from_i64(n))
    }

    fn imag_unit() -> Self {
        Self::from_crational(&CRational::i())
    }

    /// Parses an unsigned numeric literal such as `3`, `0.25` or `1e-3`.
    fn parse_literal(text: &str) -> Option<Self> {
        parse_decimal(text).map(|r| Self::from_crational(&CRational::real(r)))
    }

    fn is_one(&self) -> bool {
        self.minus(&Self::one()).is_zero()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.times(&r))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }

    /// Integer power; negative exponents need a unit.
    fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|r| r.pow(e.unsigned_abs()))
        }
    }
}

/// How a coefficient prints inside a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffText {
    /// Exactly one.
    One,
    /// Exactly minus one.
    MinusOne,
    /// A real number; the flag is true when it is negative (text holds the
    /// absolute value).
    Real { negative: bool, text: String },
    /// Anything else; printed in parentheses.
    Compound(String),
}

/// True when every coefficient of `values` is zero (exact rings) or below
/// `tol` in magnitude (float rings).
pub fn vanishes<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>, tol: f64) -> bool {
    values
        .into_iter()
        .all(|c| if S::EXACT { c.is_zero() } else { c.is_zero() || c.magnitude() <= tol })
}
