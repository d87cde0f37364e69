//! Shared report emission: the fixed-column CSV schema and its JSON twin.
//!
//! CSV columns, in order: family, q, g, param, empirical, main,
//! normalized_error. Floats are printed with 15 significant digits, so two
//! runs with identical inputs produce byte-identical files.

use serde::Serialize;

use crate::moments::MomentReport;

/// 15-significant-digit rendering used by every CSV column holding a float.
pub fn format_float(x: f64) -> String {
    format!("{x:.14e}")
}

pub const CSV_HEADER: &str = "family,q,g,param,empirical,main,normalized_error";

pub fn csv_row(r: &MomentReport) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        r.family,
        r.q,
        r.g,
        r.param(),
        format_float(r.empirical),
        format_float(r.main),
        format_float(r.normalized_error),
    )
}

/// Renders a full CSV document (header plus one row per report).
pub fn to_csv(rows: &[MomentReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

/// JSON document wrapping any serializable report payload.
#[derive(Debug, Serialize)]
pub struct JsonReport<T: Serialize> {
    pub schema: &'static str,
    pub command: String,
    pub payload: T,
}

pub fn to_json<T: Serialize>(command: &str, payload: T) -> serde_json::Result<String> {
    let doc = JsonReport {
        schema: "ffql-report-v1",
        command: command.to_string(),
        payload,
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}
