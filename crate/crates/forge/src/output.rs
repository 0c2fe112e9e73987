//! CSV and JSON renderings of a [`RunReport`].
//!
//! CSV uses `,` separators, `.` decimals, LF line endings and 17
//! significant digits. Sweeps become one row per grid point; other modes
//! become `quantity,value` rows with dotted / indexed paths.

use serde_json::Value;

use crate::config::Format;
use crate::error::CliError;
use crate::report::{Results, RunReport};

/// 17 significant digits, enough to round-trip any `f64`.
/// Negative zero is written as zero.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn format_number(n: &serde_json::Number) -> String {
    if let Some(i) = n.as_i64() {
        i.to_string()
    } else if let Some(u) = n.as_u64() {
        u.to_string()
    } else {
        format_float(n.as_f64().unwrap_or(f64::NAN))
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        Value::Number(n) => out.push((prefix.to_string(), format_number(n))),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Null => out.push((prefix.to_string(), String::new())),
    }
}

fn csv_error(e: impl std::fmt::Display) -> CliError {
    CliError::io(format!("csv: {e}"))
}

pub fn render_csv(report: &RunReport) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    match &report.results {
        Results::Sweep(sweep) => {
            w.write_record(&sweep.columns).map_err(csv_error)?;
            for row in &sweep.rows {
                w.write_record(row.iter().map(|&x| format_float(x)))
                    .map_err(csv_error)?;
            }
        }
        other => {
            let value = serde_json::to_value(other).map_err(csv_error)?;
            let mut rows = Vec::new();
            flatten("", &value, &mut rows);
            w.write_record(["quantity", "value"]).map_err(csv_error)?;
            for (k, v) in rows {
                w.write_record([k, v]).map_err(csv_error)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}

pub fn render_json(report: &RunReport) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| CliError::io(format!("json: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn render(report: &RunReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => render_csv(report),
        Format::Json => render_json(report),
    }
}
