//! Run specifications read by `star verify`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::source::PhiFile;

pub const SCHEMA: &str = "starprod/1";

/// The seed used when nothing else pins one.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// ℏ used when a run names none.
pub const DEFAULT_HBAR: f64 = 0.5;

/// One value or a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn values(&self) -> Vec<f64> {
        match self {
            OneOrMany::One(x) => vec![*x],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// A table given inline or by path (relative to the spec file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhiRef {
    Path(PathBuf),
    Inline(PhiFile),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    #[default]
    Pass,
    Fail,
}

/// A probe entry. Fields a kind does not read are ignored by it.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub kind: String,
    #[serde(default)]
    pub hbar: Option<OneOrMany>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub max_degree: Option<u32>,
    #[serde(default)]
    pub max_terms: Option<usize>,
    #[serde(default)]
    pub rho: Option<Vec<f64>>,
    /// MacGyver base `C`, or the `λ̃` bound for the ρ′ probe.
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub q_bound: Option<f64>,
    #[serde(default)]
    pub varrho: Option<f64>,
    /// Truncation degree `D` of Gram and GNS data.
    #[serde(default)]
    pub degree: Option<u32>,
    /// Number of random evaluation points.
    #[serde(default)]
    pub points: Option<usize>,
    /// Number of random polynomial pairs.
    #[serde(default)]
    pub pairs: Option<usize>,
    #[serde(default)]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub expect: Option<Expect>,
}

impl ProbeConfig {
    pub fn of_kind(kind: &str) -> Self {
        Self { kind: kind.into(), ..Self::default() }
    }
}

/// One catalog or table with the probes to run on it.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub catalog: Option<String>,
    #[serde(default)]
    pub phi: Option<PhiRef>,
    #[serde(default)]
    pub dimension: Option<usize>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    #[serde(default)]
    pub ring: Option<String>,
    #[serde(default)]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub hbar: Option<OneOrMany>,
    /// `None` runs the default suite; an empty list runs nothing.
    #[serde(default)]
    pub probes: Option<Vec<ProbeConfig>>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Default expectation for every probe of the run.
    #[serde(default)]
    pub expect: Option<Expect>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default)]
    pub schema: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    pub runs: Vec<RunConfig>,
    /// Where `verify` writes the JSON report.
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Where `verify` writes per-case CSV rows.
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpecText {
    Many(RunSpec),
    One(RunConfig),
}

impl RunSpec {
    /// Accepts a full spec or a single run at top level.
    pub fn from_json(text: &str) -> CliResult<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let parsed = if value.get("runs").is_some() {
            SpecText::Many(serde_json::from_value(value)?)
        } else {
            SpecText::One(serde_json::from_value(value)?)
        };
        let spec = match parsed {
            SpecText::Many(s) => s,
            SpecText::One(run) => RunSpec { runs: vec![run], ..RunSpec::default() },
        };
        if let Some(schema) = &spec.schema {
            if schema != SCHEMA {
                return Err(CliError::Schema(format!("expected `{SCHEMA}`, found `{schema}`")));
            }
        }
        for run in &spec.runs {
            if run.catalog.is_some() == run.phi.is_some() {
                return Err(CliError::Config("each run needs exactly one of `catalog` and `phi`".into()));
            }
        }
        Ok(spec)
    }

    /// The spec shipped with the binary.
    pub fn bundled() -> Self {
        Self::from_json(DEFAULT_SPEC).expect("bundled spec is valid")
    }
}

pub const DEFAULT_SPEC: &str = include_str!("../specs/default.json");

/// Coefficient ring of the exact suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ring {
    Complex,
    Rational,
    Series,
    RationalQ,
}

impl Ring {
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(match text {
            "complex" => Ring::Complex,
            "rational" => Ring::Rational,
            "series" => Ring::Series,
            "rational_q" => Ring::RationalQ,
            other => return Err(CliError::Config(format!("unknown ring `{other}`"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Ring::Complex => "complex",
            Ring::Rational => "rational",
            Ring::Series => "series",
            Ring::RationalQ => "rational_q",
        }
    }

    /// Rings where ℏ is a formal variable rather than a number.
    pub fn is_formal(self) -> bool {
        matches!(self, Ring::Series | Ring::RationalQ)
    }
}
