//! What a command multiplies with: a named catalog or a table file.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use starprod_core::catalog::Catalog;
use starprod_core::params::{Evaluation, ParamScalar, ParameterCatalog};
use starprod_core::parse::parse_poly_with;
use starprod_core::poisson::{poisson_from_phi, PoissonStructure};
use starprod_core::reduction::{PhiTable, ReductionStar, StarProduct};
use starprod_core::scalar::{CRational, TruncSeries};
use starprod_core::{Error as CoreError, GeneratorKind};

use crate::error::{CliError, CliResult};

/// One relation `φ̃(x_j x_i) = tail`, 1-based with `j > i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relation {
    pub j: usize,
    pub i: usize,
    pub tail: String,
}

/// The JSON table format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiFile {
    pub dimension: usize,
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default)]
    pub ring: Option<String>,
    #[serde(default)]
    pub truncation_order: Option<usize>,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    pub relations: Vec<Relation>,
}

fn default_kind() -> String {
    "x".into()
}

/// A validated table file.
#[derive(Debug, Clone)]
pub struct LoadedPhi {
    pub file: PhiFile,
    pub kind: GeneratorKind,
    pub params: ParameterCatalog,
    /// Relations whose tail was written with letters out of standard order
    /// and got reordered on load.
    pub normalized: Vec<(usize, usize)>,
}

impl LoadedPhi {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let file: PhiFile = serde_json::from_str(text)?;
        let kind = match file.kind.as_str() {
            "x" => GeneratorKind::X,
            "w" => GeneratorKind::W,
            other => return Err(CliError::Config(format!("unknown generator kind `{other}`"))),
        };
        if file.dimension == 0 {
            return Err(CliError::Config("dimension must be positive".into()));
        }
        let mut params = ParameterCatalog::new();
        for (name, rule) in &file.parameters {
            params.extend_from_text(&format!("{name}={rule}"))?;
        }
        let mut normalized = Vec::new();
        for r in &file.relations {
            if !(1 <= r.i && r.i < r.j && r.j <= file.dimension) {
                return Err(CliError::Config(format!("relation needs 1 <= i < j <= d, got j={} i={}", r.j, r.i)));
            }
            if !letters_in_order(&r.tail) {
                normalized.push((r.j, r.i));
            }
        }
        Ok(Self { file, kind, params, normalized })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn table<S: ParamScalar>(&self, at: &Evaluation) -> CliResult<PhiTable<S>> {
        let d = self.file.dimension;
        let mut phi = PhiTable::new(d, self.kind);
        for r in &self.file.relations {
            let failure: RefCell<Option<CoreError>> = RefCell::new(None);
            let resolve = |name: &str| {
                if !self.params.contains(name) {
                    return None;
                }
                match self.params.realize::<S>(name, at) {
                    Ok(v) => Some(v),
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        None
                    }
                }
            };
            let tail = parse_poly_with(&r.tail, d, self.kind, &resolve);
            if let Some(e) = failure.into_inner() {
                return Err(e.into());
            }
            phi.set_tail(r.i - 1, r.j - 1, tail?)?;
        }
        Ok(phi)
    }
}

/// True when every product in `text` lists its generators by increasing
/// index (a cheap lexical check; the parser itself is order-agnostic).
fn letters_in_order(text: &str) -> bool {
    let bytes = text.as_bytes();
    let mut last = 0usize;
    let mut depth = 0i32;
    let mut k = 0;
    while k < bytes.len() {
        let b = bytes[k];
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => last = 0,
            b'x' | b'w' => {
                let start = k + 1;
                let mut end = start;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                if let Ok(idx) = text[start..end].parse::<usize>() {
                    if idx < last {
                        return false;
                    }
                    last = idx;
                }
                k = end;
                continue;
            }
            _ => {}
        }
        k += 1;
    }
    true
}

/// A catalog or a table file.
#[derive(Debug, Clone)]
pub enum Source {
    Catalog(Catalog),
    Phi(Box<LoadedPhi>),
}

impl Source {
    pub fn catalog(id: &str, dim: Option<usize>, params: &ParameterCatalog) -> CliResult<Self> {
        let cat = Catalog::from_text(id, dim, params)?;
        cat.validate()?;
        Ok(Source::Catalog(cat))
    }

    pub fn label(&self) -> String {
        match self {
            Source::Catalog(c) => c.id.to_string(),
            Source::Phi(_) => "phi_table".into(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Source::Catalog(c) => c.dim,
            Source::Phi(p) => p.file.dimension,
        }
    }

    pub fn kind(&self) -> GeneratorKind {
        match self {
            Source::Catalog(c) => c.kind(),
            Source::Phi(p) => p.kind,
        }
    }

    pub fn params(&self) -> &ParameterCatalog {
        match self {
            Source::Catalog(c) => &c.params,
            Source::Phi(p) => &p.params,
        }
    }

    /// The generating table; `None` for the symmetrized family.
    pub fn table<S: ParamScalar>(&self, at: &Evaluation) -> CliResult<Option<PhiTable<S>>> {
        match self {
            Source::Catalog(c) => Ok(c.table(at)?),
            Source::Phi(p) => p.table(at).map(Some),
        }
    }

    pub fn engine<S: ParamScalar>(&self, at: &Evaluation) -> CliResult<Box<dyn StarProduct<S>>> {
        match self {
            Source::Catalog(c) => Ok(c.engine(at)?),
            Source::Phi(p) => Ok(Box::new(ReductionStar::new(p.table(at)?))),
        }
    }

    /// The closed form, when the family has one that applies.
    pub fn closed_form<S: ParamScalar>(&self, at: &Evaluation) -> CliResult<Option<Box<dyn StarProduct<S>>>> {
        match self {
            Source::Catalog(c) => match c.closed_form(at) {
                Ok(p) => Ok(Some(p)),
                Err(CoreError::Unsupported(_)) => Ok(None),
                Err(e) => Err(e.into()),
            },
            Source::Phi(_) => Ok(None),
        }
    }

    /// First-order bracket, exact.
    pub fn poisson(&self, truncation: usize) -> CliResult<PoissonStructure<CRational>> {
        match self {
            Source::Catalog(c) => Ok(c.poisson(truncation)?),
            Source::Phi(p) => {
                let phi = p.table::<TruncSeries<CRational>>(&Evaluation::Series(truncation.max(1)))?;
                Ok(poisson_from_phi(&phi))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use starprod_core::scalar::{Complex64, Scalar};

    const LOG_CANONICAL: &str = r#"{"dimension": 2, "kind": "x", "ring": "complex",
        "parameters": {"q": "exp_i"},
        "relations": [{"j": 2, "i": 1, "tail": "(q-1)*x1*x2"}]}"#;

    #[test]
    fn loads_and_realizes_parameters() {
        let phi = LoadedPhi::from_json(LOG_CANONICAL).unwrap();
        assert!(phi.normalized.is_empty());
        let at = Evaluation::Point(CRational::ratio(1, 2));
        let table = phi.table::<Complex64>(&at).unwrap();
        let tail = table.tail(0, 1).unwrap();
        let c = tail.terms().values().next().unwrap();
        assert!((c - (Complex64::new(0.0, 0.5).exp() - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_relations_and_records_reordering() {
        let bad = LOG_CANONICAL.replace(r#""j": 2, "i": 1"#, r#""j": 1, "i": 2"#);
        assert!(matches!(LoadedPhi::from_json(&bad), Err(CliError::Config(_))));
        let swapped = LOG_CANONICAL.replace("x1*x2", "x2*x1");
        assert_eq!(LoadedPhi::from_json(&swapped).unwrap().normalized, vec![(2, 1)]);
        let unknown = LOG_CANONICAL.replace("(q-1)", "(s-1)");
        let phi = LoadedPhi::from_json(&unknown).unwrap();
        assert!(phi.table::<Complex64>(&Evaluation::Point(CRational::zero())).is_err());
    }

    #[test]
    fn exact_ring_reports_unrepresentable_rules() {
        let phi = LoadedPhi::from_json(LOG_CANONICAL).unwrap();
        let err = phi.table::<CRational>(&Evaluation::Point(CRational::ratio(1, 2))).unwrap_err();
        assert!(matches!(err, CliError::Core(CoreError::NotRepresentable { .. })));
    }
}
