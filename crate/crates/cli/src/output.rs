//! CSV traces and JSON reports.

use std::fs;
use std::path::{Path, PathBuf};

use ctqw::engine::EvolutionTrace;
use serde::Serialize;
use serde_json::Value;

use crate::error::{io_error, CliError};

const SIGNIFICANT_DIGITS: usize = 12;

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `printf("%.12g")`: 12 significant digits, trailing zeros removed,
/// exponent form outside `[1e-4, 1e12)`.
pub fn format_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

/// Header `t,<labels>` then one row per grid point, LF line endings.
pub fn trace_csv(trace: &EvolutionTrace) -> String {
    let mut out = String::from("t");
    for l in &trace.labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (t, row) in trace.times.iter().zip(&trace.rows) {
        out.push_str(&format_g(*t));
        for v in row {
            out.push(',');
            out.push_str(&format_g(*v));
        }
        out.push('\n');
    }
    out
}

pub fn table_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(format_g).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub claim: String,
    pub parameters: Value,
    pub measured: Value,
    pub expected: Value,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_error(&path, e))?;
    Ok(path)
}

pub fn write_report(dir: &Path, name: &str, report: &Report) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    write_file(dir, name, &text)
}
