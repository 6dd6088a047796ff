//! Parameter rules: how a named deformation parameter depends on ℏ.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::GeneratorKind;
use crate::scalar::{parse_decimal, CRational, Complex64, RationalQ, Scalar, TruncSeries};

/// Evaluation rule for a parameter `a(ℏ)`.
#[derive(Clone, PartialEq, Eq)]
pub enum ParamRule {
    /// `e^{iℏ}`
    ExpI,
    /// `e^{−ℏ}`
    ExpNeg,
    /// `1 + iℏ`
    Affine,
    /// `1/(1 − iℏ)`, pole at `ℏ = −i`.
    InverseAffine,
    /// `e^{iλℏ}`
    ExpScaled(BigRational),
    /// `(N + e^{i(N+1)ℏ})/(N + 1)`
    Mixed(u32),
    /// Independent of ℏ.
    Constant(CRational),
    /// The indeterminate `q` of the rational-function ring.
    Formal,
}

impl ParamRule {
    /// Parses `exp_i`, `exp_scaled:0.5`, `mixed:2`, `constant:(1+2i)`, ...
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (text, None),
        };
        let bad = |msg: &str| Error::Parameter { name: text.to_string(), msg: msg.to_string() };
        let rule = match (head, arg) {
            ("exp_i", None) => ParamRule::ExpI,
            ("exp_neg", None) => ParamRule::ExpNeg,
            ("affine", None) => ParamRule::Affine,
            ("inverse_affine", None) => ParamRule::InverseAffine,
            ("formal", None) => ParamRule::Formal,
            ("exp_scaled", Some(a)) => ParamRule::ExpScaled(parse_signed(a).ok_or_else(|| bad("bad λ"))?),
            ("mixed", Some(a)) => ParamRule::Mixed(a.parse().map_err(|_| bad("bad N"))?),
            ("constant", Some(a)) => ParamRule::Constant(parse_constant(a).ok_or_else(|| bad("bad constant"))?),
            _ => return Err(bad("unknown rule")),
        };
        Ok(rule)
    }

    /// Exact Taylor coefficients in `t` through `t^n`.
    ///
    /// `None` for `Formal`, which has no expansion.
    pub fn expansion(&self, n: usize) -> Option<Vec<CRational>> {
        let i = CRational::i();
        let exp_series = |a: &CRational| {
            let mut out = Vec::with_capacity(n + 1);
            let mut term = CRational::one();
            for k in 0..=n {
                if k > 0 {
                    term = term.times(a).times(&CRational::ratio(1, k as i64));
                }
                out.push(term.clone());
            }
            out
        };
        let coeffs = match self {
            ParamRule::ExpI => exp_series(&i),
            ParamRule::ExpNeg => exp_series(&CRational::from_i64(-1)),
            ParamRule::Affine => {
                let mut v = Vec::from([CRational::one(), i]);
                v.truncate(n + 1);
                v
            }
            ParamRule::InverseAffine => (0..=n).map(|k| i.pow(k as u64)).collect(),
            ParamRule::ExpScaled(l) => exp_series(&i.times(&CRational::real(l.clone()))),
            ParamRule::Mixed(big_n) => {
                let m = *big_n as i64 + 1;
                let inv_m = CRational::ratio(1, m);
                let mut v = exp_series(&i.times(&CRational::from_i64(m)));
                for c in v.iter_mut().skip(1) {
                    *c = c.times(&inv_m);
                }
                v
            }
            ParamRule::Constant(c) => Vec::from([c.clone()]),
            ParamRule::Formal => return None,
        };
        Some(coeffs)
    }

    /// Value at a complex ℏ in double precision.
    pub fn eval_f64(&self, hbar: Complex64) -> Result<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        Ok(match self {
            ParamRule::ExpI => (i * hbar).exp(),
            ParamRule::ExpNeg => (-hbar).exp(),
            ParamRule::Affine => one + i * hbar,
            ParamRule::InverseAffine => {
                let den = one - i * hbar;
                if den.norm() < 1e-300 {
                    return Err(Error::Pole { rule: self.to_string() });
                }
                one / den
            }
            ParamRule::ExpScaled(l) => (i * hbar * l.to_f64().unwrap_or(f64::NAN)).exp(),
            ParamRule::Mixed(n) => {
                let n = *n as f64;
                (Complex64::new(n, 0.0) + (i * hbar * (n + 1.0)).exp()) / (n + 1.0)
            }
            ParamRule::Constant(c) => Complex64::from_crational(c),
            ParamRule::Formal => return Err(Error::NotRepresentable { rule: self.to_string() }),
        })
    }

    /// Value at an exact ℏ when the rule stays in ℚ(i) there.
    pub fn eval_exact(&self, hbar: &CRational) -> Result<CRational> {
        let i = CRational::i();
        let one = CRational::one();
        match self {
            ParamRule::Affine => Ok(one.plus(&i.times(hbar))),
            ParamRule::InverseAffine => one
                .minus(&i.times(hbar))
                .inv()
                .ok_or_else(|| Error::Pole { rule: self.to_string() }),
            ParamRule::Constant(c) => Ok(c.clone()),
            ParamRule::Formal => Err(Error::NotRepresentable { rule: self.to_string() }),
            _ if hbar.is_zero() => Ok(one),
            _ => Err(Error::NotRepresentable { rule: self.to_string() }),
        }
    }

    /// True for `e^{...}`-type rules.
    pub fn is_transcendental(&self) -> bool {
        matches!(self, ParamRule::ExpI | ParamRule::ExpNeg | ParamRule::ExpScaled(_) | ParamRule::Mixed(_))
    }
}

fn parse_signed(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.strip_prefix('-') {
        Some(rest) => parse_decimal(rest).map(|r| -r),
        None => parse_decimal(text.strip_prefix('+').unwrap_or(text)),
    }
}

fn parse_constant(text: &str) -> Option<CRational> {
    let p = parse_poly::<CRational>(text, 1, GeneratorKind::X).ok()?;
    match p.max_degree() {
        None => Some(CRational::zero()),
        Some(0) => Some(p.coeff(&crate::monomial::MultiIndex::zero(1))),
        Some(_) => None,
    }
}

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ParamRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamRule::ExpI => f.write_str("exp_i"),
            ParamRule::ExpNeg => f.write_str("exp_neg"),
            ParamRule::Affine => f.write_str("affine"),
            ParamRule::InverseAffine => f.write_str("inverse_affine"),
            ParamRule::ExpScaled(l) => write!(f, "exp_scaled:{}", rational_text(l)),
            ParamRule::Mixed(n) => write!(f, "mixed:{n}"),
            ParamRule::Constant(c) => write!(f, "constant:{c}"),
            ParamRule::Formal => f.write_str("formal"),
        }
    }
}

impl fmt::Debug for ParamRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Where parameters get evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluation {
    /// At a fixed (possibly complex) ℏ.
    Point(CRational),
    /// As power series in `t`, truncated after `t^n`.
    Series(usize),
    /// Symbolically in the rational-function ring.
    Formal,
}

/// A ring in which parameter rules can be realized.
pub trait ParamScalar: Scalar {
    fn realize(rule: &ParamRule, at: &Evaluation) -> Result<Self>;
}

impl ParamScalar for CRational {
    fn realize(rule: &ParamRule, at: &Evaluation) -> Result<Self> {
        match at {
            Evaluation::Point(h) => rule.eval_exact(h),
            _ => match rule {
                ParamRule::Constant(c) => Ok(c.clone()),
                _ => Err(Error::NotRepresentable { rule: rule.to_string() }),
            },
        }
    }
}

impl ParamScalar for Complex64 {
    fn realize(rule: &ParamRule, at: &Evaluation) -> Result<Self> {
        match at {
            Evaluation::Point(h) => {
                if let ParamRule::InverseAffine = rule {
                    // detect the pole exactly before going to floats
                    rule.eval_exact(h)?;
                }
                rule.eval_f64(Complex64::from_crational(h))
            }
            _ => match rule {
                ParamRule::Constant(c) => Ok(Complex64::from_crational(c)),
                _ => Err(Error::NotRepresentable { rule: rule.to_string() }),
            },
        }
    }
}

impl<C: Scalar> ParamScalar for TruncSeries<C> {
    fn realize(rule: &ParamRule, at: &Evaluation) -> Result<Self> {
        match (rule, at) {
            (ParamRule::Constant(c), _) => Ok(TruncSeries::constant(C::from_crational(c))),
            (_, Evaluation::Series(n)) => {
                let coeffs = rule.expansion(*n).ok_or_else(|| Error::NotRepresentable { rule: rule.to_string() })?;
                Ok(TruncSeries::new(coeffs.iter().map(C::from_crational).collect(), *n))
            }
            _ => Err(Error::NotRepresentable { rule: rule.to_string() }),
        }
    }
}

impl ParamScalar for RationalQ {
    fn realize(rule: &ParamRule, at: &Evaluation) -> Result<Self> {
        match (rule, at) {
            (ParamRule::Formal, _) => Ok(RationalQ::q()),
            (ParamRule::Constant(c), _) => Ok(RationalQ::from_crational(c)),
            (_, Evaluation::Point(h)) => rule.eval_exact(h).map(|c| RationalQ::from_crational(&c)),
            _ => Err(Error::NotRepresentable { rule: rule.to_string() }),
        }
    }
}

/// What a catalog needs from a parameter's expansion `a(t) = a_0 + a_1 t + ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expansion {
    /// `a_0 = 1`.
    StartsAtOne,
    /// `a = 1 + it + O(t²)`.
    OnePlusIt,
    /// `a = 1 − t + O(t²)`.
    OneMinusT,
}

/// Named parameter bindings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParameterCatalog {
    rules: BTreeMap<String, ParamRule>,
}

impl ParameterCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, rule: ParamRule) -> Self {
        self.bind(name, rule);
        self
    }

    pub fn bind(&mut self, name: &str, rule: ParamRule) {
        self.rules.insert(name.to_string(), rule);
    }

    /// Parses `q=exp_i,p=affine,r=constant:1`.
    pub fn parse_bindings(text: &str) -> Result<Self> {
        let mut out = Self::new();
        out.extend_from_text(text)?;
        Ok(out)
    }

    pub fn extend_from_text(&mut self, text: &str) -> Result<()> {
        for item in split_top_level(text) {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (name, rule) = item.split_once('=').ok_or_else(|| Error::Parameter {
                name: item.to_string(),
                msg: "expected NAME=RULE".into(),
            })?;
            let rule = ParamRule::parse(rule).map_err(|e| match e {
                Error::Parameter { msg, .. } => Error::Parameter { name: name.trim().to_string(), msg },
                other => other,
            })?;
            self.bind(name.trim(), rule);
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&ParamRule> {
        self.rules.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.rules.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ParamRule)> {
        self.rules.iter()
    }

    /// The rule for `name`, or `default` when unbound.
    pub fn rule_or(&self, name: &str, default: ParamRule) -> ParamRule {
        self.rules.get(name).cloned().unwrap_or(default)
    }

    pub fn realize<S: ParamScalar>(&self, name: &str, at: &Evaluation) -> Result<S> {
        let rule = self.rules.get(name).ok_or_else(|| Error::Parameter {
            name: name.to_string(),
            msg: "unbound".into(),
        })?;
        S::realize(rule, at).map_err(|e| match e {
            Error::NotRepresentable { rule } => Error::NotRepresentable { rule: format!("{name}={rule}") },
            Error::Pole { rule } => Error::Pole { rule: format!("{name}={rule}") },
            other => other,
        })
    }

    /// Checks the leading expansion of `name` against a requirement.
    ///
    /// Formal rules pass (they stand for the indeterminate itself).
    pub fn validate(&self, name: &str, need: Expansion) -> Result<()> {
        let rule = self.rules.get(name).ok_or_else(|| Error::Parameter {
            name: name.to_string(),
            msg: "unbound".into(),
        })?;
        let Some(coeffs) = rule.expansion(1) else {
            return Ok(());
        };
        let a0 = coeffs.first().cloned().unwrap_or_default();
        let a1 = coeffs.get(1).cloned().unwrap_or_default();
        let (want1, label) = match need {
            Expansion::StartsAtOne => (None, "1 + O(t)"),
            Expansion::OnePlusIt => (Some(CRational::i()), "1 + it + O(t^2)"),
            Expansion::OneMinusT => (Some(CRational::from_i64(-1)), "1 - t + O(t^2)"),
        };
        if !a0.is_one() || want1.is_some_and(|w| w != a1) {
            return Err(Error::Parameter {
                name: name.to_string(),
                msg: format!("rule `{rule}` does not expand as {label}"),
            });
        }
        Ok(())
    }
}

fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// Exact rational from an `f64` (binary expansion, no rounding).
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// `ℏ` as an exact complex rational from decimal text.
pub fn parse_hbar(text: &str) -> Result<CRational> {
    let bad = || Error::Parameter { name: "hbar".into(), msg: format!("bad value `{text}`") };
    parse_constant(text).ok_or_else(bad)
}

impl Evaluation {
    /// Real ℏ as `f64`, if this is a point evaluation on the real line.
    pub fn real_hbar(&self) -> Option<f64> {
        match self {
            Evaluation::Point(h) if h.im.is_zero() => h.re.to_f64(),
            _ => None,
        }
    }
}
