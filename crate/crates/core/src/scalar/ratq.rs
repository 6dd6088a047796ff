use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{CRational, CoeffText, Scalar};

/// Univariate polynomial in `q` over exact complex rationals, coefficients
/// stored from the constant term upward with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<CRational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<CRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: CRational) -> Self {
        Self::new(vec![c])
    }

    /// `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![CRational::zero(); k + 1];
        coeffs[k] = CRational::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[CRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> Option<&CRational> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).plus(&rhs.coeff(k))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).minus(&rhs.coeff(k))).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::default();
        }
        let mut out = vec![CRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &CRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, rhs: &Self) -> Option<(Self, Self)> {
        let lead_inv = rhs.lead()?.inv()?;
        let dr = rhs.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dr {
            return Some((Self::default(), self.clone()));
        }
        let mut quot = vec![CRational::zero(); rem.len() - dr];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dr].times(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].minus(&c.times(b));
            }
            quot[k] = c;
        }
        rem.truncate(dr);
        Some((Self::new(quot), Self::new(rem)))
    }

    pub fn monic(&self) -> Self {
        match self.lead().and_then(|l| l.inv()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Horner evaluation in any ring.
    pub fn eval<S: Scalar>(&self, q: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc.times(q).plus(&S::from_crational(c)))
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let monomial = match k {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{k}"),
            };
            let (negative, body) = match c.coeff_text(true) {
                CoeffText::One if k == 0 => (false, "1".into()),
                CoeffText::MinusOne if k == 0 => (true, "1".into()),
                CoeffText::One => (false, monomial),
                CoeffText::MinusOne => (true, monomial),
                CoeffText::Real { negative, text } if k == 0 => (negative, text),
                CoeffText::Real { negative, text } => (negative, format!("{text}*{monomial}")),
                CoeffText::Compound(text) if k == 0 => (false, text),
                CoeffText::Compound(text) => (false, format!("{text}*{monomial}")),
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
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Rational function `num/den` in the indeterminate `q`, kept with
/// `gcd(num, den) = 1` and `den` monic so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalQ {
    num: UPoly,
    den: UPoly,
}

impl RationalQ {
    /// The indeterminate itself.
    pub fn q() -> Self {
        Self { num: UPoly::monomial(1), den: UPoly::monomial(0) }
    }

    pub fn from_poly(num: UPoly) -> Self {
        Self { num, den: UPoly::monomial(0) }
    }

    /// `num/den`; `None` if `den` is zero.
    pub fn from_parts(num: UPoly, den: UPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduced(num, den))
    }

    fn reduced(num: UPoly, den: UPoly) -> Self {
        if num.is_zero() {
            return Self { num, den: UPoly::monomial(0) };
        }
        let g = den.gcd(&num);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0)
        };
        if let Some(inv) = den.lead().and_then(|l| l.inv()) {
            if !den.lead().unwrap().is_one() {
                num = num.scale(&inv);
                den = den.scale(&inv);
            }
        }
        Self { num, den }
    }

    pub fn numer(&self) -> &UPoly {
        &self.num
    }

    pub fn denom(&self) -> &UPoly {
        &self.den
    }

    /// True when the denominator is 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Substitutes a value for `q`; `None` on a pole.
    pub fn eval<S: Scalar>(&self, q: &S) -> Option<S> {
        self.num.eval(q).div(&self.den.eval(q))
    }
}

impl fmt::Debug for RationalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Scalar for RationalQ {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::from_poly(UPoly::default())
    }
    fn one() -> Self {
        Self::from_poly(UPoly::monomial(0))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::reduced(self.num.add(&rhs.num), self.den.clone());
        }
        Self::reduced(self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)), self.den.mul(&rhs.den))
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negate())
    }
    fn times(&self, rhs: &Self) -> Self {
        if self.is_polynomial() && rhs.is_polynomial() {
            return Self::from_poly(self.num.mul(&rhs.num));
        }
        Self::reduced(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn negate(&self) -> Self {
        Self { num: self.num.scale(&CRational::from_i64(-1)), den: self.den.clone() }
    }
    fn conj(&self) -> Self {
        Self::reduced(self.num.conj(), self.den.conj())
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::reduced(self.den.clone(), self.num.clone()))
    }
    fn from_crational(c: &CRational) -> Self {
        Self::from_poly(UPoly::constant(c.clone()))
    }
    fn magnitude(&self) -> f64 {
        self.num.coeffs().iter().map(|c| c.magnitude()).sum::<f64>()
            / self.den.coeffs().iter().map(|c| c.magnitude()).sum::<f64>()
    }
    fn coeff_text(&self, full: bool) -> CoeffText {
        if self.is_polynomial() && self.num.degree().unwrap_or(0) == 0 {
            return self.num.coeff(0).coeff_text(full);
        }
        CoeffText::Compound(format!("({self})"))
    }
}
