use serde::{Deserialize, Serialize};
use slicing_core::{ProofStep, VerificationReport};

use crate::config::Format;
use crate::error::{Result, SlicingError};
use crate::spec::{BodySpec, DensitySpec};

pub const CSV_HEADER: [&str; 9] = ["theorem", "n", "k", "lhs", "rhs", "ratio", "epsilon", "est_error", "pass"];
pub const SUMMARY_HEADER: [&str; 5] = ["theorem", "instances", "passed", "min_ratio", "max_ratio"];

/// JSON has no NaN; failed instances store `null`.
mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub name: String,
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
    pub holds: bool,
}

impl From<&ProofStep> for StepRecord {
    fn from(s: &ProofStep) -> Self {
        Self { name: s.name.to_string(), relation: s.relation.as_str().to_string(), lhs: s.lhs, rhs: s.rhs, tol: s.tol, holds: s.holds }
    }
}

/// Serializable form of one theorem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub theorem: String,
    pub n: usize,
    pub k: usize,
    #[serde(with = "nan_as_null")]
    pub lhs: f64,
    #[serde(with = "nan_as_null")]
    pub rhs: f64,
    #[serde(with = "nan_as_null")]
    pub ratio: f64,
    #[serde(with = "nan_as_null")]
    pub epsilon: f64,
    /// Columns of the orthonormal frame of the maximizing subspace.
    pub witness_frame: Vec<Vec<f64>>,
    #[serde(with = "nan_as_null")]
    pub est_error: f64,
    pub pass: bool,
    #[serde(with = "nan_as_null")]
    pub margin: f64,
    #[serde(with = "nan_as_null")]
    pub max_section: f64,
    #[serde(with = "nan_as_null")]
    pub constant: f64,
    #[serde(with = "nan_as_null")]
    pub factor: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<BodySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<StepRecord>,
    #[serde(default)]
    pub search_restarts: usize,
    #[serde(default)]
    pub search_evaluations: usize,
    #[serde(default, with = "nan_as_null")]
    pub search_budget_change: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportRecord {
    pub fn from_report(r: &VerificationReport, body: Option<BodySpec>, density: Option<DensitySpec>) -> Self {
        Self {
            theorem: r.theorem.as_str().to_string(),
            n: r.n,
            k: r.k,
            lhs: r.lhs,
            rhs: r.rhs,
            ratio: r.ratio,
            epsilon: r.epsilon,
            witness_frame: r.witness.columns().map(<[f64]>::to_vec).collect(),
            est_error: r.est_error,
            pass: r.pass,
            margin: r.margin,
            max_section: r.max_section,
            constant: r.constants.c_nk,
            factor: r.constants.factor,
            seed: r.seed,
            body,
            density,
            steps: r.steps.iter().map(StepRecord::from).collect(),
            search_restarts: r.search.restarts,
            search_evaluations: r.search.evaluations,
            search_budget_change: r.search.budget_change,
            error: None,
        }
    }

    /// A failing row for an instance that could not be evaluated.
    #[allow(clippy::too_many_arguments)]
    pub fn failed(theorem: &str, n: usize, k: usize, seed: u64, body: Option<BodySpec>, density: Option<DensitySpec>, error: String) -> Self {
        Self {
            theorem: theorem.to_string(),
            n,
            k,
            lhs: f64::NAN,
            rhs: f64::NAN,
            ratio: f64::NAN,
            epsilon: f64::NAN,
            witness_frame: Vec::new(),
            est_error: f64::NAN,
            pass: false,
            margin: f64::NAN,
            max_section: f64::NAN,
            constant: f64::NAN,
            factor: f64::NAN,
            seed,
            body,
            density,
            steps: Vec::new(),
            search_restarts: 0,
            search_evaluations: 0,
            search_budget_change: f64::NAN,
            error: Some(error),
        }
    }
}

/// The fixed CSV columns of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub theorem: String,
    pub n: usize,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub epsilon: f64,
    pub est_error: f64,
    pub pass: bool,
}

impl From<&ReportRecord> for CsvRow {
    fn from(r: &ReportRecord) -> Self {
        Self {
            theorem: r.theorem.clone(),
            n: r.n,
            k: r.k,
            lhs: r.lhs,
            rhs: r.rhs,
            ratio: r.ratio,
            epsilon: r.epsilon,
            est_error: r.est_error,
            pass: r.pass,
        }
    }
}

/// Per-theorem min/max ratio over a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub theorem: String,
    pub instances: usize,
    pub passed: usize,
    #[serde(with = "nan_as_null")]
    pub min_ratio: f64,
    #[serde(with = "nan_as_null")]
    pub max_ratio: f64,
}

pub fn summarize(records: &[ReportRecord]) -> Vec<SummaryRow> {
    let mut rows: Vec<SummaryRow> = Vec::new();
    for r in records {
        let i = match rows.iter().position(|s| s.theorem == r.theorem) {
            Some(i) => i,
            None => {
                rows.push(SummaryRow { theorem: r.theorem.clone(), instances: 0, passed: 0, min_ratio: f64::NAN, max_ratio: f64::NAN });
                rows.len() - 1
            }
        };
        let s = &mut rows[i];
        s.instances += 1;
        s.passed += usize::from(r.pass);
        if r.ratio.is_finite() {
            s.min_ratio = if s.min_ratio.is_nan() { r.ratio } else { s.min_ratio.min(r.ratio) };
            s.max_ratio = if s.max_ratio.is_nan() { r.ratio } else { s.max_ratio.max(r.ratio) };
        }
    }
    rows
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn csv_text(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w)?;
    let bytes = w.into_inner().map_err(|e| SlicingError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Serializes one report: a JSON object, or the CSV header plus one row.
pub fn emit_report(report: &ReportRecord, format: Format) -> Result<String> {
    emit_reports(std::slice::from_ref(report), format)
}

/// A JSON array of reports, or CSV with the fixed header.
pub fn emit_reports(reports: &[ReportRecord], format: Format) -> Result<String> {
    match format {
        Format::Json if reports.len() == 1 => Ok(serde_json::to_string_pretty(&reports[0])?),
        Format::Json => Ok(serde_json::to_string_pretty(reports)?),
        Format::Csv => csv_text(|w| {
            w.write_record(CSV_HEADER)?;
            for r in reports {
                w.write_record([
                    r.theorem.clone(),
                    r.n.to_string(),
                    r.k.to_string(),
                    num(r.lhs),
                    num(r.rhs),
                    num(r.ratio),
                    num(r.epsilon),
                    num(r.est_error),
                    r.pass.to_string(),
                ])?;
            }
            Ok(())
        }),
    }
}

pub fn emit_summary(rows: &[SummaryRow], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(rows)?),
        Format::Csv => csv_text(|w| {
            w.write_record(SUMMARY_HEADER)?;
            for s in rows {
                w.write_record([s.theorem.clone(), s.instances.to_string(), s.passed.to_string(), num(s.min_ratio), num(s.max_ratio)])?;
            }
            Ok(())
        }),
    }
}

/// Parses CSV produced by [`emit_reports`]; the header must match exactly.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(SlicingError::usage("csv header", format!("expected `{}`", CSV_HEADER.join(","))));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let loc = |c: usize| format!("csv row {} column {}", i + 2, CSV_HEADER[c]);
        let f = |c: usize| rec[c].parse::<f64>().map_err(|e| SlicingError::usage(loc(c), e.to_string()));
        let u = |c: usize| rec[c].parse::<usize>().map_err(|e| SlicingError::usage(loc(c), e.to_string()));
        rows.push(CsvRow {
            theorem: rec[0].to_string(),
            n: u(1)?,
            k: u(2)?,
            lhs: f(3)?,
            rhs: f(4)?,
            ratio: f(5)?,
            epsilon: f(6)?,
            est_error: f(7)?,
            pass: rec[8].parse().map_err(|_| SlicingError::usage(loc(8), "expected true or false"))?,
        });
    }
    Ok(rows)
}

pub fn parse_json_report(text: &str) -> Result<ReportRecord> {
    Ok(serde_json::from_str(text)?)
}
