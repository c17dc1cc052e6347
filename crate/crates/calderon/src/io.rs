//! Step-function input files.
//!
//! Two formats, dispatched on extension: `.json` is an array of
//! `{"value": v, "mass": m}` objects; anything else is CSV with rows
//! `value,mass` and an optional header row.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rearrangement::StepFunction;

#[derive(Deserialize)]
struct PieceIn {
    value: f64,
    mass: f64,
}

pub fn read_step_function(path: &Path) -> Result<StepFunction> {
    let text = std::fs::read_to_string(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    if ext.eq_ignore_ascii_case("json") {
        parse_json(&text)
    } else {
        parse_csv(&text)
    }
}

pub fn parse_json(text: &str) -> Result<StepFunction> {
    let rows: Vec<PieceIn> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("JSON step function: {e}")))?;
    StepFunction::new(rows.into_iter().map(|p| (p.value, p.mass)))
}

pub fn parse_csv(text: &str) -> Result<StepFunction> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut pieces = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("CSV row {}: {e}", i + 1)))?;
        if record.len() != 2 {
            return Err(Error::Parse(format!(
                "CSV rows are value,mass; row {} has {} fields",
                i + 1,
                record.len()
            )));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(v), Ok(m)) => pieces.push((v, m)),
            // A single non-numeric leading row is a header.
            _ if i == 0 => continue,
            _ => {
                return Err(Error::Parse(format!(
                    "CSV row {}: expected two numbers, got {:?}",
                    i + 1,
                    &record
                )))
            }
        }
    }
    StepFunction::new(pieces)
}
