use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{CoeffText, Scalar};

/// Exact complex rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den + 0i`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn complex(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `|z|²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses an unsigned decimal literal (`12`, `0.25`, `3/4`, `1e-3`,
/// `2.5E+2`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = text[pos + 1..].parse().ok()?;
            (&text[..pos], e)
        }
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: String = [int_part, frac_part].concat();
    let numer: BigInt = digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Some(if scale >= 0 {
        BigRational::from_integer(numer * pow)
    } else {
        BigRational::new(numer, pow)
    })
}

impl fmt::Debug for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&rational_text(&self.re));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}i)", rational_text(&self.re), sign, rational_text(&self.im.abs()))
    }
}

impl Scalar for CRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::real(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        Self { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
    fn minus(&self, rhs: &Self) -> Self {
        Self { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
    fn times(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(&self.re * &rhs.re);
        }
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
    fn negate(&self) -> Self {
        Self { re: -&self.re, im: -&self.im }
    }
    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -&self.im / &n })
    }
    fn from_crational(c: &CRational) -> Self {
        c.clone()
    }
    fn magnitude(&self) -> f64 {
        let (re, im) = self.to_f64_pair();
        libm::hypot(re, im)
    }
    fn coeff_text(&self, _full: bool) -> CoeffText {
        if self.im.is_zero() {
            if self.re.is_one() {
                return CoeffText::One;
            }
            if (-&self.re).is_one() {
                return CoeffText::MinusOne;
            }
            return CoeffText::Real {
                negative: self.re.is_negative(),
                text: rational_text(&self.re.abs()),
            };
        }
        CoeffText::Compound(self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("0.25"), Some(BigRational::new(1.into(), 4.into())));
        assert_eq!(parse_decimal("1e-3"), Some(BigRational::new(1.into(), 1000.into())));
        assert_eq!(parse_decimal("2.5E+2"), Some(BigRational::from_integer(250.into())));
        assert_eq!(parse_decimal("3/6"), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_decimal(".5"), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_decimal("1/0"), None);
        assert_eq!(parse_decimal("abc"), None);
        assert_eq!(parse_decimal("."), None);
    }

    #[test]
    fn inverse_and_display() {
        let z = CRational::complex(1, 1, 2, 1);
        let w = z.inv().unwrap();
        assert_eq!(z.times(&w), CRational::one());
        assert_eq!(z.to_string(), "(1+2i)");
        assert_eq!(z.conj().to_string(), "(1-2i)");
        assert_eq!(CRational::ratio(-3, 4).to_string(), "-3/4");
        assert!(CRational::zero().inv().is_none());
    }
}
