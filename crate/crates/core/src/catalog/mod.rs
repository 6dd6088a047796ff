//! Named star-product families with closed forms and generating tables.

pub mod logcanonical;
pub mod nonquadratic;
pub mod qcomb;
pub mod symmetrized;
pub mod translated;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::params::{Evaluation, Expansion, ParamRule, ParamScalar, ParameterCatalog};
use crate::poisson::{poisson_from_phi, PoissonStructure};
use crate::poly::GeneratorKind;
use crate::reduction::{PhiTable, ReductionStar, StarProduct};
use crate::scalar::{CRational, Scalar, TruncSeries};

pub use logcanonical::{log_canonical_star, log_canonical_table, wick_involution_condition, wick_star, LogCanonical};
pub use nonquadratic::{
    lambda_m, lambda_tilde, nonquadratic_star, nonquadratic_table, nonquadratic_terms, quantum_weyl_star,
    quantum_weyl_table, Nonquadratic, NonquadraticParams, QuantumWeyl, WordZeroOne,
};
pub use qcomb::{multinomial, q_factorial, q_integer, q_multinomial, q_multinomial_by_factorials, root_of_unity_order};
pub use symmetrized::{equivalence_t, sigma_oracle_star, symmetrized_star, t_factor, Direction, SymmetrizedLogCanonical};
pub use translated::{translate, translated_poisson, translated_star, translated_table, Translated};

/// A catalog identifier such as `nonquadratic{N=2}`.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogId {
    LogCanonical,
    WickLogCanonical,
    Nonquadratic { n: u32 },
    QuantumWeyl { lambda: BigRational },
    SymmetrizedLogCanonical,
    Translated { shift: Vec<CRational> },
}

impl CatalogId {
    /// Parses an identifier; inline `{...}` entries other than `N`,
    /// `lambda` and `c` are returned as parameter bindings.
    pub fn parse(text: &str) -> Result<(Self, ParameterCatalog)> {
        let text = text.trim();
        let (name, inline) = match text.find('{') {
            Some(pos) => {
                let body = text[pos + 1..]
                    .strip_suffix('}')
                    .ok_or_else(|| bad_id(text, "missing `}`"))?;
                (&text[..pos], body)
            }
            None => (text, ""),
        };
        let mut n = None;
        let mut lambda = None;
        let mut shift = None;
        let mut rest = Vec::new();
        for item in split_top_level(inline) {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (key, value) = item.split_once('=').ok_or_else(|| bad_id(text, "expected KEY=VALUE"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "N" => n = Some(value.parse::<u32>().map_err(|_| bad_id(text, "bad N"))?),
                "lambda" | "λ" => lambda = Some(parse_real(value).ok_or_else(|| bad_id(text, "bad lambda"))?),
                "c" => shift = Some(parse_vector(value).ok_or_else(|| bad_id(text, "bad shift vector"))?),
                _ => rest.push(item),
            }
        }
        let id = match name.trim() {
            "log_canonical" => CatalogId::LogCanonical,
            "wick_log_canonical" => CatalogId::WickLogCanonical,
            "nonquadratic" => CatalogId::Nonquadratic { n: n.unwrap_or(1) },
            "quantum_weyl" => CatalogId::QuantumWeyl { lambda: lambda.unwrap_or_else(|| BigRational::from_integer(1.into())) },
            "symmetrized_log_canonical" => CatalogId::SymmetrizedLogCanonical,
            "translated" => CatalogId::Translated { shift: shift.unwrap_or_default() },
            other => return Err(bad_id(other, "unknown catalog")),
        };
        let mut params = ParameterCatalog::new();
        params.extend_from_text(&rest.join(","))?;
        Ok((id, params))
    }

    pub fn kind(&self) -> GeneratorKind {
        match self {
            CatalogId::WickLogCanonical => GeneratorKind::W,
            _ => GeneratorKind::X,
        }
    }

    /// Fixed dimension, if the family has one.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            CatalogId::Nonquadratic { .. } => Some(3),
            CatalogId::QuantumWeyl { .. } => Some(2),
            CatalogId::Translated { shift } if !shift.is_empty() => Some(shift.len()),
            _ => None,
        }
    }

    /// Names of the parameters the family reads.
    pub fn parameter_names(&self) -> &'static [&'static str] {
        match self {
            CatalogId::Nonquadratic { .. } => &["p", "q", "r", "s"],
            CatalogId::QuantumWeyl { .. } => &["p", "q"],
            _ => &["q"],
        }
    }
}

fn bad_id(text: &str, msg: &str) -> Error {
    Error::Parameter { name: format!("catalog `{text}`"), msg: msg.to_string() }
}

fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
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

fn parse_real(text: &str) -> Option<BigRational> {
    let c = ParamRule::parse(&format!("constant:{text}")).ok()?;
    match c {
        ParamRule::Constant(c) if c.is_real() => Some(c.re),
        _ => None,
    }
}

/// `1:-1`, `(1,-1)` or `[1,-1]`.
fn parse_vector(text: &str) -> Option<Vec<CRational>> {
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .or_else(|| text.strip_prefix('[').and_then(|t| t.strip_suffix(']')));
    let parts: Vec<&str> = match inner {
        Some(body) => split_top_level(body),
        None => text.split(':').collect(),
    };
    parts
        .into_iter()
        .map(|p| match ParamRule::parse(&format!("constant:{}", p.trim())).ok()? {
            ParamRule::Constant(c) => Some(c),
            _ => None,
        })
        .collect()
}

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogId::LogCanonical => f.write_str("log_canonical"),
            CatalogId::WickLogCanonical => f.write_str("wick_log_canonical"),
            CatalogId::Nonquadratic { n } => write!(f, "nonquadratic{{N={n}}}"),
            CatalogId::QuantumWeyl { lambda } => write!(f, "quantum_weyl{{lambda={}}}", rational_text(lambda)),
            CatalogId::SymmetrizedLogCanonical => f.write_str("symmetrized_log_canonical"),
            CatalogId::Translated { shift } => {
                f.write_str("translated{c=(")?;
                for (k, c) in shift.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")}")
            }
        }
    }
}

/// A catalog family instantiated at a dimension with parameter rules.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub id: CatalogId,
    pub dim: usize,
    pub params: ParameterCatalog,
}

impl Catalog {
    /// Fills in default rules for unbound parameters and checks the
    /// dimension. User bindings in `params` take precedence.
    pub fn new(id: CatalogId, dim: usize, params: ParameterCatalog) -> Result<Self> {
        if let Some(fixed) = id.fixed_dim() {
            if dim != fixed {
                return Err(Error::DimensionMismatch { left: fixed, right: dim });
            }
        }
        if dim == 0 {
            return Err(Error::DimensionMismatch { left: 1, right: 0 });
        }
        let mut params = params;
        let defaults: Vec<(&str, ParamRule)> = match &id {
            CatalogId::LogCanonical | CatalogId::SymmetrizedLogCanonical | CatalogId::Translated { .. } => {
                alloc::vec![("q", ParamRule::ExpI)]
            }
            CatalogId::WickLogCanonical => alloc::vec![("q", ParamRule::ExpNeg)],
            CatalogId::Nonquadratic { .. } => alloc::vec![
                ("p", ParamRule::ExpI),
                ("q", ParamRule::ExpI),
                ("r", ParamRule::ExpI),
            ],
            CatalogId::QuantumWeyl { lambda } => {
                alloc::vec![("p", ParamRule::Affine), ("q", ParamRule::ExpScaled(lambda.clone()))]
            }
        };
        for (name, rule) in defaults {
            if !params.contains(name) {
                params.bind(name, rule);
            }
        }
        Ok(Self { id, dim, params })
    }

    /// Parses `id` (with inline bindings) and merges `extra` bindings.
    pub fn from_text(id: &str, dim: Option<usize>, extra: &ParameterCatalog) -> Result<Self> {
        let (id, mut params) = CatalogId::parse(id)?;
        for (name, rule) in extra.iter() {
            params.bind(name, rule.clone());
        }
        let dim = dim.or(id.fixed_dim()).unwrap_or(2);
        Self::new(id, dim, params)
    }

    pub fn kind(&self) -> GeneratorKind {
        self.id.kind()
    }

    /// Checks the leading expansions required by the family.
    pub fn validate(&self) -> Result<()> {
        match &self.id {
            CatalogId::LogCanonical | CatalogId::SymmetrizedLogCanonical | CatalogId::Translated { .. } => {
                self.params.validate("q", Expansion::OnePlusIt)
            }
            CatalogId::WickLogCanonical => self.params.validate("q", Expansion::OneMinusT),
            CatalogId::Nonquadratic { .. } => {
                for name in ["p", "q", "r", "s"] {
                    if self.params.contains(name) {
                        self.params.validate(name, Expansion::StartsAtOne)?;
                    }
                }
                Ok(())
            }
            CatalogId::QuantumWeyl { .. } => {
                self.params.validate("p", Expansion::OnePlusIt)?;
                self.params.validate("q", Expansion::StartsAtOne)
            }
        }
    }

    fn shift<S: Scalar>(&self) -> Vec<S> {
        match &self.id {
            CatalogId::Translated { shift } if !shift.is_empty() => shift.iter().map(S::from_crational).collect(),
            _ => alloc::vec![S::zero(); self.dim],
        }
    }

    fn nonquadratic_params<S: ParamScalar>(&self, at: &Evaluation) -> Result<(NonquadraticParams<S>, S)> {
        let n = match self.id {
            CatalogId::Nonquadratic { n } => n,
            _ => 0,
        };
        let p = self.params.realize("p", at)?;
        let q = self.params.realize("q", at)?;
        let r: S = self.params.realize("r", at)?;
        let s = if self.params.contains("s") {
            self.params.realize("s", at)?
        } else {
            r.inv().ok_or(Error::NotInvertible)?
        };
        Ok((NonquadraticParams { p, q, r, n }, s))
    }

    /// The generating table, or `None` for the symmetrized family (whose
    /// product is not defined by a standard-order table).
    pub fn table<S: ParamScalar>(&self, at: &Evaluation) -> Result<Option<PhiTable<S>>> {
        let table = match &self.id {
            CatalogId::LogCanonical | CatalogId::WickLogCanonical => {
                log_canonical_table(self.dim, self.kind(), &self.params.realize::<S>("q", at)?)
            }
            CatalogId::Translated { .. } => {
                let base = log_canonical_table(self.dim, self.kind(), &self.params.realize::<S>("q", at)?);
                translated_table(&base, &self.shift::<S>())?
            }
            CatalogId::Nonquadratic { .. } => {
                let (params, s) = self.nonquadratic_params::<S>(at)?;
                nonquadratic_table(&params, &s)
            }
            CatalogId::QuantumWeyl { .. } => {
                quantum_weyl_table(&self.params.realize::<S>("p", at)?, &self.params.realize::<S>("q", at)?)
            }
            CatalogId::SymmetrizedLogCanonical => return Ok(None),
        };
        Ok(Some(table))
    }

    /// Closed-form product.
    pub fn closed_form<S: ParamScalar>(&self, at: &Evaluation) -> Result<Box<dyn StarProduct<S>>> {
        Ok(match &self.id {
            CatalogId::LogCanonical | CatalogId::WickLogCanonical => Box::new(LogCanonical {
                dim: self.dim,
                kind: self.kind(),
                q: self.params.realize("q", at)?,
            }),
            CatalogId::SymmetrizedLogCanonical => {
                Box::new(SymmetrizedLogCanonical { dim: self.dim, q: self.params.realize("q", at)? })
            }
            CatalogId::Translated { .. } => {
                let base = log_canonical_table(self.dim, self.kind(), &self.params.realize::<S>("q", at)?);
                Box::new(Translated { base: ReductionStar::new(base), shift: self.shift() })
            }
            CatalogId::Nonquadratic { .. } => {
                let (params, s) = self.nonquadratic_params::<S>(at)?;
                if !s.minus(&params.r.inv().ok_or(Error::NotInvertible)?).is_zero() {
                    // the word-sum formula presumes s = r⁻¹
                    return Err(Error::Unsupported("closed form needs s = r^-1".into()));
                }
                Box::new(Nonquadratic { params })
            }
            CatalogId::QuantumWeyl { .. } => {
                Box::new(QuantumWeyl { p: self.params.realize("p", at)?, q: self.params.realize("q", at)? })
            }
        })
    }

    /// The reduction engine on the generating table, falling back to the
    /// closed form for the symmetrized family.
    pub fn engine<S: ParamScalar>(&self, at: &Evaluation) -> Result<Box<dyn StarProduct<S>>> {
        match self.table::<S>(at)? {
            Some(phi) => Ok(Box::new(ReductionStar::new(phi))),
            None => self.closed_form(at),
        }
    }

    /// The Poisson structure read off at first order in `t`.
    pub fn poisson<C: Scalar>(&self, truncation: usize) -> Result<PoissonStructure<C>>
    where
        TruncSeries<C>: ParamScalar,
    {
        let at = Evaluation::Series(truncation.max(1));
        let phi = match &self.id {
            CatalogId::SymmetrizedLogCanonical => {
                log_canonical_table(self.dim, self.kind(), &self.params.realize::<TruncSeries<C>>("q", &at)?)
            }
            _ => self.table::<TruncSeries<C>>(&at)?.expect("table exists"),
        };
        Ok(poisson_from_phi(&phi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifiers_round_trip() {
        for text in [
            "log_canonical",
            "wick_log_canonical",
            "nonquadratic{N=2}",
            "quantum_weyl{lambda=1/2}",
            "symmetrized_log_canonical",
            "translated{c=(1,-1)}",
        ] {
            let (id, _) = CatalogId::parse(text).unwrap();
            assert_eq!(id.to_string(), text);
        }
        let (id, params) = CatalogId::parse("nonquadratic{N=0, r=constant:1}").unwrap();
        assert_eq!(id, CatalogId::Nonquadratic { n: 0 });
        assert_eq!(params.get("r"), Some(&ParamRule::Constant(CRational::one())));
        let (id, _) = CatalogId::parse("translated{c=1:-1}").unwrap();
        assert_eq!(id.fixed_dim(), Some(2));
        assert!(CatalogId::parse("moyal").is_err());
    }

    #[test]
    fn defaults_and_validation() {
        let cat = Catalog::from_text("wick_log_canonical", Some(3), &ParameterCatalog::new()).unwrap();
        assert!(cat.validate().is_ok());
        let bad = Catalog::from_text("log_canonical", Some(2), &ParameterCatalog::parse_bindings("q=exp_neg").unwrap()).unwrap();
        assert!(bad.validate().is_err());
        assert!(Catalog::from_text("nonquadratic", Some(2), &ParameterCatalog::new()).is_err());
    }
}
