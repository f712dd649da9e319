//! CSV rows and JSON summaries of sweep results.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use centmean_core::harness::{summarize, InequalityReport, TheoremSummary, Verdict};
use serde::Serialize;

use crate::AppError;

pub const CSV_HEADER: [&str; 14] = [
    "theorem", "n", "r", "s", "alpha", "gamma", "R", "f_label", "b_label", "lhs", "rhs", "constant", "ratio", "verdict",
];

/// Shortest round-trip form; empty for NaN.
fn cell(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

fn row(rep: &InequalityReport) -> [String; 14] {
    let c = &rep.case;
    [
        c.id(),
        c.n.to_string(),
        cell(c.r),
        cell(c.s),
        cell(c.alpha),
        cell(c.gamma),
        c.radius.map(cell).unwrap_or_default(),
        c.f_label.clone(),
        c.b_label.clone().unwrap_or_default(),
        cell(rep.lhs),
        cell(rep.rhs),
        cell(rep.constant),
        cell(rep.ratio),
        rep.verdict.to_string(),
    ]
}

/// Writes the header and one row per report, in the given order.
pub fn write_csv<W: Write>(reports: &[InequalityReport], out: W) -> Result<(), AppError> {
    let io = |e: csv::Error| AppError::Io(format!("cannot write CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for rep in reports {
        w.write_record(row(rep)).map_err(io)?;
    }
    w.flush().map_err(|e| AppError::Io(format!("cannot write CSV: {e}")))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Counts {
    pub cases: usize,
    pub pass: usize,
    pub fail: usize,
    pub degenerate: usize,
    pub max_ratio: Option<f64>,
}

impl From<&TheoremSummary> for Counts {
    fn from(s: &TheoremSummary) -> Self {
        Counts { cases: s.cases, pass: s.pass, fail: s.fail, degenerate: s.degenerate, max_ratio: s.max_ratio }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub theorem: String,
    pub n: u32,
    pub r: f64,
    pub s: f64,
    pub alpha: f64,
    pub gamma: f64,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub f_label: String,
    pub b_label: Option<String>,
    pub ratio: Option<f64>,
    pub diagnostic: Option<String>,
}

/// The JSON summary document.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub theorems: BTreeMap<String, Counts>,
    pub totals: Counts,
    pub failures: Vec<Failure>,
}

impl Summary {
    /// Aggregates `reports`; every id in `ids` is listed, even with zero
    /// cases.
    pub fn new(ids: &[String], reports: &[InequalityReport]) -> Self {
        let theorems: BTreeMap<String, Counts> =
            summarize(ids, reports).iter().map(|(k, v)| (k.clone(), Counts::from(v))).collect();
        let mut totals = Counts::default();
        for c in theorems.values() {
            totals.cases += c.cases;
            totals.pass += c.pass;
            totals.fail += c.fail;
            totals.degenerate += c.degenerate;
            if let Some(m) = c.max_ratio {
                totals.max_ratio = Some(totals.max_ratio.map_or(m, |t: f64| t.max(m)));
            }
        }
        let failures = reports
            .iter()
            .filter(|r| r.verdict == Verdict::Fail)
            .map(|r| Failure {
                theorem: r.case.id(),
                n: r.case.n,
                r: r.case.r,
                s: r.case.s,
                alpha: r.case.alpha,
                gamma: r.case.gamma,
                radius: r.case.radius,
                f_label: r.case.f_label.clone(),
                b_label: r.case.b_label.clone(),
                ratio: r.ratio.is_finite().then_some(r.ratio),
                diagnostic: r.diagnostic.clone(),
            })
            .collect();
        Summary { theorems, totals, failures }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, AppError> {
    File::create(path).map(BufWriter::new).map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn write_csv_file(reports: &[InequalityReport], path: &Path) -> Result<(), AppError> {
    write_csv(reports, create(path)?)
}

pub fn write_json_file(summary: &Summary, path: &Path) -> Result<(), AppError> {
    let mut w = create(path)?;
    w.write_all(summary.to_json().as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))
}
