//! Report files: the `verify` JSON, per-case CSV and merged summaries.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use starprod_core::topology::ProbeReport;

use crate::error::{CliError, CliResult};
use crate::spec::{Expect, SCHEMA};

/// One probe at one ℏ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub catalog: String,
    pub probe: String,
    /// `None` for ℏ-independent suites.
    pub hbar: Option<f64>,
    pub ring: String,
    pub seed: u64,
    pub expect: Expect,
    pub pass: bool,
    /// The outcome matched `expect`.
    pub ok: bool,
    pub cases: usize,
    pub failures: usize,
    pub worst_margin: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Wall time; only recorded on request so reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    #[serde(skip)]
    pub case_rows: Vec<CaseRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRow {
    pub digest: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl SuiteRow {
    pub fn from_report(
        catalog: &str,
        ring: &str,
        hbar: Option<f64>,
        seed: u64,
        expect: Expect,
        report: &ProbeReport,
    ) -> Self {
        let pass = report.pass;
        Self {
            catalog: catalog.into(),
            probe: report.probe.clone(),
            hbar,
            ring: ring.into(),
            seed,
            expect,
            pass,
            ok: pass == (expect == Expect::Pass),
            cases: report.cases.len(),
            failures: report.failures().count(),
            worst_margin: report.worst_margin,
            notes: report.notes.clone(),
            error: None,
            runtime_ms: None,
            case_rows: report
                .cases
                .iter()
                .map(|c| CaseRow { digest: format!("{:016x}", c.digest), lhs: c.lhs, rhs: c.rhs, margin: c.margin })
                .collect(),
        }
    }

    /// A suite that could not finish; counts as a failed probe.
    pub fn from_error(catalog: &str, probe: &str, ring: &str, hbar: Option<f64>, seed: u64, expect: Expect, error: String) -> Self {
        Self {
            catalog: catalog.into(),
            probe: probe.into(),
            hbar,
            ring: ring.into(),
            seed,
            expect,
            pass: false,
            ok: expect == Expect::Fail,
            cases: 0,
            failures: 0,
            worst_margin: 0.0,
            notes: Vec::new(),
            error: Some(error),
            runtime_ms: None,
            case_rows: Vec::new(),
        }
    }

    fn key(&self) -> (String, String, String) {
        (self.catalog.clone(), self.probe.clone(), hbar_text(self.hbar))
    }
}

pub fn hbar_text(h: Option<f64>) -> String {
    h.map_or_else(|| "formal".into(), |h| format!("{h}"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub seed: u64,
    /// Every suite came out as expected.
    pub ok: bool,
    pub suites: Vec<SuiteRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl VerifyReport {
    pub fn new(seed: u64, suites: Vec<SuiteRow>) -> Self {
        Self { schema: SCHEMA.into(), seed, ok: suites.iter().all(|s| s.ok), suites, runtime_ms: None }
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    /// Parses a report, insisting on the current schema.
    pub fn from_json(text: &str) -> CliResult<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("schema").and_then(|s| s.as_str()) {
            Some(SCHEMA) => {}
            Some(other) => return Err(CliError::Schema(format!("expected `{SCHEMA}`, found `{other}`"))),
            None => return Err(CliError::Schema("missing `schema` field".into())),
        }
        serde_json::from_value(value).map_err(|e| CliError::Schema(e.to_string()))
    }

    /// One row per case.
    pub fn write_cases_csv(&self, out: impl Write) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["catalog", "probe", "hbar", "digest", "lhs", "rhs", "margin"])?;
        for s in &self.suites {
            for c in &s.case_rows {
                w.write_record([
                    s.catalog.as_str(),
                    &s.probe,
                    &hbar_text(s.hbar),
                    &c.digest,
                    &c.lhs.to_string(),
                    &c.rhs.to_string(),
                    &c.margin.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Result of [`merge`]: the rows plus the keys that were overridden.
#[derive(Debug, Clone, PartialEq)]
pub struct Merged {
    pub rows: Vec<SuiteRow>,
    pub overridden: Vec<(String, String, String)>,
}

/// One row per (catalog, probe, ℏ), sorted by that key; later reports win.
pub fn merge(reports: &[VerifyReport]) -> Merged {
    let mut by_key: BTreeMap<(String, String, String), SuiteRow> = BTreeMap::new();
    let mut overridden = Vec::new();
    for r in reports {
        for s in &r.suites {
            if by_key.insert(s.key(), s.clone()).is_some() {
                overridden.push(s.key());
            }
        }
    }
    Merged { rows: by_key.into_values().collect(), overridden }
}

pub const SUMMARY_HEADER: [&str; 8] = ["catalog", "probe", "hbar", "ring", "pass", "ok", "cases", "worst_margin"];

pub fn write_summary_csv(rows: &[SuiteRow], out: impl Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for s in rows {
        w.write_record([
            s.catalog.as_str(),
            &s.probe,
            &hbar_text(s.hbar),
            &s.ring,
            &s.pass.to_string(),
            &s.ok.to_string(),
            &s.cases.to_string(),
            &s.worst_margin.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Summary<'a> {
    schema: &'static str,
    rows: &'a [SuiteRow],
}

pub fn summary_json(rows: &[SuiteRow]) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(&Summary { schema: SCHEMA, rows })?;
    text.push('\n');
    Ok(text)
}
