//! JSON and CSV report files.
//!
//! CSV layout: `# key=value` lines carry every scalar of the report, with
//! nested keys dotted (`totals.tuples`) and values JSON-encoded. A header
//! row and one row per stored discrepancy follow.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use super::ScanReport;
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidParams(format!("unknown report format {other:?}"))),
        }
    }
}

impl ReportFormat {
    /// From a file extension; JSON unless it is `.csv`.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
            _ => ReportFormat::Json,
        }
    }
}

const PARAM_COLUMNS: [&str; 13] = ["family", "m", "k", "s", "p", "t", "e", "r", "b", "c", "b_prime", "delta", "a"];
const TEXT_COLUMNS: [&str; 8] = ["family", "b", "c", "b_prime", "delta", "a", "expected", "observed"];

pub fn render_report(report: &ScanReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        ReportFormat::Csv => to_csv(report),
    }
}

pub fn write_report(report: &ScanReport, path: &Path, format: ReportFormat) -> Result<()> {
    fs::write(path, render_report(report, format)?)?;
    Ok(())
}

/// Reads a report written by [`write_report`] in either format.
pub fn load_report(path: &Path) -> Result<ScanReport> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(&text)?)
    } else {
        from_csv(&text)
    }
}

fn to_csv(report: &ScanReport) -> Result<String> {
    let Value::Object(mut top) = serde_json::to_value(report)? else {
        unreachable!("a report serializes to an object")
    };
    let discrepancies = top.remove("discrepancies").unwrap_or(Value::Null);
    let mut out = String::new();
    for (key, value) in &top {
        match value {
            Value::Object(inner) => {
                for (k, v) in inner {
                    out += &format!("# {}={v}\n", meta_key(&format!("{key}.{k}")));
                }
                if inner.is_empty() {
                    out += &format!("# {key}={{}}\n");
                }
            }
            v => out += &format!("# {key}={v}\n"),
        }
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = PARAM_COLUMNS
        .iter()
        .copied()
        .chain(["expected", "observed", "witness_x1", "witness_x2"])
        .collect();
    w.write_record(&header)?;
    for d in discrepancies.as_array().into_iter().flatten() {
        let params = &d["params"];
        let cell = |v: &Value| match v {
            Value::Null => String::new(),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let mut row: Vec<String> = PARAM_COLUMNS.iter().map(|c| cell(&params[*c])).collect();
        row.push(cell(&d["expected"]));
        row.push(cell(&d["observed"]));
        row.push(cell(&d["witness"][0]));
        row.push(cell(&d["witness"][1]));
        w.write_record(&row)?;
    }
    let body = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
    out += &String::from_utf8(body).map_err(|e| Error::Report(e.to_string()))?;
    Ok(out)
}

// Keys holding '=' or a leading quote are written as JSON strings.
fn meta_key(key: &str) -> String {
    if key.contains('=') || key.starts_with('"') {
        Value::String(key.into()).to_string()
    } else {
        key.into()
    }
}

fn split_meta(meta: &str) -> Option<(String, &str)> {
    if meta.starts_with('"') {
        let mut stream = serde_json::Deserializer::from_str(meta).into_iter::<String>();
        let key = stream.next()?.ok()?;
        let rest = meta[stream.byte_offset()..].strip_prefix('=')?;
        Some((key, rest))
    } else {
        meta.split_once('=').map(|(k, v)| (k.to_string(), v))
    }
}

fn from_csv(text: &str) -> Result<ScanReport> {
    let mut top = Map::new();
    let mut rows = String::new();
    for line in text.lines() {
        let Some(meta) = line.strip_prefix("# ") else {
            rows += line;
            rows.push('\n');
            continue;
        };
        let (key, value) = split_meta(meta)
            .ok_or_else(|| Error::Report(format!("malformed metadata line {line:?}")))?;
        let value: Value = serde_json::from_str(value)?;
        match key.split_once('.') {
            Some((outer, inner)) => {
                let slot = top
                    .entry(outer.to_string())
                    .or_insert_with(|| Value::Object(Map::new()));
                let Value::Object(obj) = slot else {
                    return Err(Error::Report(format!("{outer} is both scalar and nested")));
                };
                obj.insert(inner.to_string(), value);
            }
            None => {
                top.insert(key, value);
            }
        }
    }

    let mut reader = csv::Reader::from_reader(rows.as_bytes());
    let header = reader.headers()?.clone();
    let mut discrepancies = Vec::new();
    for record in reader.records() {
        let record = record?;
        let mut params = Map::new();
        let mut d = Map::new();
        let mut witness = Vec::new();
        for (name, raw) in header.iter().zip(record.iter()) {
            if raw.is_empty() {
                continue;
            }
            let value = if TEXT_COLUMNS.contains(&name) || name.starts_with("witness") {
                Value::String(raw.to_string())
            } else {
                serde_json::from_str(raw)?
            };
            match name {
                "expected" | "observed" => {
                    d.insert(name.to_string(), value);
                }
                "witness_x1" | "witness_x2" => witness.push(value),
                _ => {
                    params.insert(name.to_string(), value);
                }
            }
        }
        d.insert("params".into(), Value::Object(params));
        d.insert(
            "witness".into(),
            if witness.is_empty() { Value::Null } else { Value::Array(witness) },
        );
        discrepancies.push(Value::Object(d));
    }
    top.insert("discrepancies".into(), Value::Array(discrepancies));
    Ok(serde_json::from_value(Value::Object(top))?)
}
