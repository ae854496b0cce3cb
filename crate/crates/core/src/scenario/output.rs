use std::io::Write;

use serde::{Deserialize, Serialize};

use super::document::{parse_versioned, LoadError};
use super::SCHEMA_VERSION;
use crate::balance::MarginSample;
use crate::collision::DistanceSample;
use crate::composer::RiskReport;

/// Versioned set of composition reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub scenario: String,
    pub compositions: Vec<RiskReport>,
}

impl ReportDocument {
    pub fn new(scenario: impl Into<String>, compositions: Vec<RiskReport>) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            scenario: scenario.into(),
            compositions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Pretty JSON, lossless.
    Structured,
    /// One CSV row per composition.
    Table,
}

pub const TABLE_COLUMNS: [&str; 9] = [
    "id",
    "collision",
    "fall",
    "grasp",
    "total",
    "duration",
    "path_length",
    "mc_collision_rate",
    "mc_fall_rate",
];

fn table(doc: &ReportDocument) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TABLE_COLUMNS).expect("in-memory write");
    for r in &doc.compositions {
        let f = |v: f64| format!("{v:.6}");
        w.write_record([
            r.id.clone(),
            f(r.collision.combined),
            f(r.fall.combined),
            f(r.grasp),
            f(r.total),
            f(r.payoff.duration),
            f(r.payoff.path_length),
            f(r.monte_carlo.collision_failure_rate),
            f(r.monte_carlo.fall_failure_rate),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Renders a report document. Identical documents give identical bytes.
pub fn write_report(doc: &ReportDocument, format: ReportFormat) -> String {
    match format {
        ReportFormat::Structured => {
            let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Table => table(doc),
    }
}

/// Writes a rendered report to `sink`.
pub fn write_report_to<W: Write>(
    doc: &ReportDocument,
    format: ReportFormat,
    mut sink: W,
) -> std::io::Result<()> {
    sink.write_all(write_report(doc, format).as_bytes())?;
    sink.flush()
}

/// Reads back a structured report.
pub fn parse_report(text: &str) -> Result<ReportDocument, LoadError> {
    parse_versioned(text)
}

/// `t,d,risk` rows.
pub fn distance_series_csv(series: &[DistanceSample]) -> String {
    let mut out = String::from("t,d,risk\n");
    for s in series {
        out.push_str(&format!("{},{},{}\n", s.t, s.d, s.risk));
    }
    out
}

/// `t,margin,risk` rows.
pub fn margin_series_csv(series: &[MarginSample]) -> String {
    let mut out = String::from("t,margin,risk\n");
    for s in series {
        out.push_str(&format!("{},{},{}\n", s.t, s.margin, s.risk));
    }
    out
}
