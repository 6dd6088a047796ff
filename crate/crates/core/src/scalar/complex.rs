use alloc::format;
use alloc::string::{String, ToString};

use num_traits::ToPrimitive;

use super::{CRational, CoeffText, Scalar};

pub use num_complex::Complex64;

/// Float coefficients below this magnitude count as zero.
pub const FLOAT_ZERO_THRESHOLD: f64 = 1e-14;

/// Formats `x` with `sig` significant digits, dropping trailing zeros.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sig = sig.max(1);
    let exp = libm::floor(libm::log10(libm::fabs(x))) as i32;
    if !(-5..15).contains(&exp) {
        let s = format!("{:.*e}", sig - 1, x);
        return match s.split_once('e') {
            Some((m, e)) => format!("{}e{}", trim_zeros(m), e),
            None => s,
        };
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).into()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn float_text(x: f64, full: bool) -> String {
    if full {
        format!("{:?}", x)
    } else {
        format_sig(x, 5)
    }
}

/// `(a+bi)` text for a complex float, or the bare real part when the
/// imaginary part vanishes.
pub(crate) fn complex_text(z: &Complex64, full: bool) -> String {
    if z.im.abs() < FLOAT_ZERO_THRESHOLD {
        return float_text(z.re, full);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("({}{}{}i)", float_text(z.re, full), sign, float_text(z.im.abs(), full))
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.norm() < FLOAT_ZERO_THRESHOLD
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        if self.norm() == 0.0 {
            None
        } else {
            Some(Complex64::inv(self))
        }
    }
    fn from_crational(c: &CRational) -> Self {
        Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn parse_literal(text: &str) -> Option<Self> {
        let t = text.trim();
        if t.contains('/') {
            return super::parse_decimal(t)
                .map(|r| Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0));
        }
        if !t.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
            return None;
        }
        t.parse::<f64>().ok().map(|x| Complex64::new(x, 0.0))
    }
    fn pow(&self, e: u64) -> Self {
        if e <= i32::MAX as u64 {
            self.powi(e as i32)
        } else {
            self.powf(e as f64)
        }
    }
    fn coeff_text(&self, full: bool) -> CoeffText {
        if self.im.abs() < FLOAT_ZERO_THRESHOLD {
            if self.re == 1.0 {
                return CoeffText::One;
            }
            if self.re == -1.0 {
                return CoeffText::MinusOne;
            }
            return CoeffText::Real { negative: self.re < 0.0, text: float_text(self.re.abs(), full) };
        }
        CoeffText::Compound(complex_text(self, full))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(libm::cos(0.5), 5), "0.87758");
        assert_eq!(format_sig(libm::sin(0.5), 5), "0.47943");
        assert_eq!(format_sig(1.0, 5), "1");
        assert_eq!(format_sig(123456.0, 5), "123456");
        assert_eq!(format_sig(-0.000123456, 5), "-0.00012346");
        assert_eq!(format_sig(1.5e-9, 5), "1.5e-9");
    }

    #[test]
    fn coefficient_text() {
        let q = Complex64::new(libm::cos(0.5), libm::sin(0.5));
        assert_eq!(q.coeff_text(false), CoeffText::Compound("(0.87758+0.47943i)".into()));
        assert_eq!(Complex64::new(1.0, 0.0).coeff_text(false), CoeffText::One);
    }
}
