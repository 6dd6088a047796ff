use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{CRational, CoeffText, Scalar};

/// Truncation order used when a run does not choose one.
pub const DEFAULT_TRUNCATION: usize = 8;

/// Power series `Σ c_k t^k` known through `t^order`.
///
/// `order == None` marks an exact polynomial in `t` (constants, for
/// instance); products with a truncated series inherit the finite order.
#[derive(Clone)]
pub struct TruncSeries<C: Scalar> {
    coeffs: Vec<C>,
    order: Option<usize>,
}

impl<C: Scalar> TruncSeries<C> {
    /// Builds a series truncated after `t^order`.
    pub fn new(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.truncate(order + 1);
        Self::normalized(coeffs, Some(order))
    }

    /// An exact polynomial in `t`.
    pub fn polynomial(coeffs: Vec<C>) -> Self {
        Self::normalized(coeffs, None)
    }

    pub fn constant(c: C) -> Self {
        Self::polynomial(vec![c])
    }

    /// `t` itself, exact.
    pub fn t() -> Self {
        Self::polynomial(vec![C::zero(), C::one()])
    }

    fn normalized(mut coeffs: Vec<C>, order: Option<usize>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs, order }
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    /// Coefficient of `t^k` (zero past the stored data).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Re-truncates after `t^n` (never raises precision).
    pub fn truncated(&self, n: usize) -> Self {
        let order = Some(self.order.map_or(n, |o| o.min(n)));
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order.unwrap() + 1);
        Self::normalized(coeffs, order)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let order = min_order(self.order, rhs.order);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let len = order.map_or(len, |o| len.min(o + 1));
        let zero = C::zero();
        let coeffs = (0..len)
            .map(|k| f(self.coeffs.get(k).unwrap_or(&zero), rhs.coeffs.get(k).unwrap_or(&zero)))
            .collect();
        Self::normalized(coeffs, order)
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        Self::normalized(self.coeffs.iter().map(f).collect(), self.order)
    }
}

fn min_order(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<C: Scalar> PartialEq for TruncSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        let order = min_order(self.order, other.order);
        let len = self.coeffs.len().max(other.coeffs.len());
        let len = order.map_or(len, |o| len.min(o + 1));
        (0..len).all(|k| self.coeff(k).minus(&other.coeff(k)).is_zero())
    }
}

impl<C: Scalar> fmt::Debug for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Scalar> TruncSeries<C> {
    fn render(&self, full: bool) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let monomial = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => alloc::format!("t^{k}"),
            };
            let (negative, body) = match c.coeff_text(full) {
                CoeffText::One => (false, if k == 0 { "1".into() } else { monomial.clone() }),
                CoeffText::MinusOne => (true, if k == 0 { "1".into() } else { monomial.clone() }),
                CoeffText::Real { negative, text } => {
                    (negative, if k == 0 { text } else { alloc::format!("{text}*{monomial}") })
                }
                CoeffText::Compound(text) => {
                    (false, if k == 0 { text } else { alloc::format!("{text}*{monomial}") })
                }
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
        if let Some(o) = self.order {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&alloc::format!("O(t^{})", o + 1));
        } else if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<C: Scalar> fmt::Display for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl<C: Scalar> Scalar for TruncSeries<C> {
    const EXACT: bool = C::EXACT;

    fn zero() -> Self {
        Self::polynomial(Vec::new())
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a.plus(b))
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a.minus(b))
    }
    fn times(&self, rhs: &Self) -> Self {
        let order = min_order(self.order, rhs.order);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::normalized(Vec::new(), order);
        }
        let full = self.coeffs.len() + rhs.coeffs.len() - 1;
        let len = order.map_or(full, |o| full.min(o + 1));
        let mut out = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::normalized(out, order)
    }
    fn negate(&self) -> Self {
        self.map(|c| c.negate())
    }
    fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }
    fn inv(&self) -> Option<Self> {
        let a0 = self.coeff(0);
        let b0 = a0.inv()?;
        let order = match self.order {
            Some(o) => o,
            None if self.coeffs.len() <= 1 => return Some(Self::constant(b0)),
            None => return None,
        };
        let mut b = Vec::with_capacity(order + 1);
        b.push(b0.clone());
        for k in 1..=order {
            let mut acc = C::zero();
            for j in 1..=k {
                let aj = self.coeff(j);
                if !aj.is_zero() {
                    acc = acc.plus(&aj.times(&b[k - j]));
                }
            }
            b.push(acc.times(&b0).negate());
        }
        Some(Self::new(b, order))
    }
    fn from_crational(c: &CRational) -> Self {
        Self::constant(C::from_crational(c))
    }
    fn magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).sum()
    }
    fn parse_literal(text: &str) -> Option<Self> {
        C::parse_literal(text).map(Self::constant)
    }
    fn coeff_text(&self, full: bool) -> CoeffText {
        if self.coeffs.len() <= 1 {
            let c = self.coeff(0);
            return c.coeff_text(full);
        }
        CoeffText::Compound(alloc::format!("({})", self.render(full)))
    }
}
