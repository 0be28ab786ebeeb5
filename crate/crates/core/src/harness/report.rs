//! CSV rows and plain-text tables for experiment output.

use super::experiments::RateReport;
use std::fmt::Write as _;

/// One metric row: `(mechanism, codec, name) -> value +- stderr over n`.
#[derive(Debug, Clone)]
pub struct CsvRow {
    pub mechanism: String,
    pub codec: String,
    pub name: String,
    pub value: f64,
    pub stderr: Option<f64>,
    pub n: usize,
}

impl CsvRow {
    pub fn new(
        mechanism: &str,
        codec: &str,
        name: &str,
        value: f64,
        stderr: Option<f64>,
        n: usize,
    ) -> Self {
        Self {
            mechanism: mechanism.to_string(),
            codec: codec.to_string(),
            name: name.to_string(),
            value,
            stderr,
            n,
        }
    }
}

pub const CSV_HEADER: &str = "mechanism,codec,name,value,stderr,n";

pub fn to_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let stderr = r.stderr.map(|s| format!("{s}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.mechanism, r.codec, r.name, r.value, stderr, r.n
        );
    }
    out
}

/// Flattens a rate report into metric rows.
pub fn rate_report_rows(r: &RateReport) -> Vec<CsvRow> {
    let mut rows = vec![CsvRow::new(
        &r.mechanism,
        &r.codec,
        "mean_payload_bits",
        r.mean_payload_bits,
        Some(r.payload_se),
        r.n_trials,
    )];
    if let (Some(m), Some(se)) = (r.mean_steps, r.steps_se) {
        rows.push(CsvRow::new(&r.mechanism, &r.codec, "mean_steps", m, Some(se), r.n_trials));
    }
    if let Some(mi) = r.mutual_information_bits {
        rows.push(CsvRow::new(&r.mechanism, &r.codec, "mutual_information_bits", mi, None, r.n_trials));
    }
    if let (Some(e), se) = (r.expected_log_ratio_sup_bits, r.expected_log_ratio_sup_se) {
        rows.push(CsvRow::new(&r.mechanism, &r.codec, "expected_log_ratio_sup_bits", e, se, r.n_trials));
    }
    if let Some(g) = r.gap_to_mi_bits {
        rows.push(CsvRow::new(&r.mechanism, &r.codec, "gap_to_mi_bits", g, None, r.n_trials));
    }
    if let Some(g) = r.residual_constant_bits {
        rows.push(CsvRow::new(&r.mechanism, &r.codec, "residual_constant_bits", g, None, r.n_trials));
    }
    rows
}

/// Fixed-width summary table for terminal output.
pub fn format_table(rows: &[CsvRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:<10} {:<30} {:>14} {:>12} {:>8}",
        "mechanism", "codec", "metric", "value", "stderr", "n"
    );
    for r in rows {
        let stderr = r.stderr.map(|s| format!("{s:.6}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<24} {:<10} {:<30} {:>14.6} {:>12} {:>8}",
            r.mechanism, r.codec, r.name, r.value, stderr, r.n
        );
    }
    out
}
