//! The `score,label` CSV format.
//!
//! ASCII only, mandatory header `score,label`, LF or CRLF line endings, one
//! record per line with a finite decimal score and a label of `0` or `1`.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use triscore::{Dataset, LabeledScore};

use crate::error::CliError;

pub const HEADER: &str = "score,label";

/// A parsed score file plus the SHA-256 of its raw bytes.
#[derive(Debug, Clone)]
pub struct ScoreFile {
    pub dataset: Dataset,
    pub sha256: String,
}

fn parse_error(line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse(bytes: &[u8]) -> Result<ScoreFile, CliError> {
    if let Some(pos) = bytes.iter().position(|b| !b.is_ascii()) {
        let line = 1 + bytes[..pos].iter().filter(|&&b| b == b'\n').count() as u64;
        return Err(parse_error(line, "non-ASCII byte"));
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(bytes);
    let mut records = reader.records();

    match records.next() {
        Some(Ok(header)) if header.len() == 2 && &header[0] == "score" && &header[1] == "label" => {}
        Some(Ok(header)) => {
            let line = header.position().map_or(1, |p| p.line());
            return Err(parse_error(line, format!("expected header {HEADER:?}")));
        }
        Some(Err(e)) => return Err(parse_error(1, e.to_string())),
        None => return Err(parse_error(1, format!("missing header {HEADER:?}"))),
    }

    let mut items = Vec::new();
    for record in records {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(parse_error(line, format!("expected 2 fields, found {}", record.len())));
        }
        let score: f64 = record[0]
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite())
            .ok_or_else(|| parse_error(line, format!("score {:?} is not a finite decimal", &record[0])))?;
        let label = match &record[1] {
            "1" => true,
            "0" => false,
            other => return Err(parse_error(line, format!("label {other:?} is not 0 or 1"))),
        };
        items.push(LabeledScore::new(score, label.into())?);
    }

    Ok(ScoreFile {
        dataset: Dataset::new(items),
        sha256: hex::encode(Sha256::digest(bytes)),
    })
}

/// Renders a dataset in score-file format, scores in shortest round-trip
/// form so parsing the output reproduces them exactly.
pub fn render(data: &Dataset) -> String {
    let mut out = String::with_capacity(16 * (data.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for item in data.items() {
        let label = u8::from(item.label().is_positive());
        writeln!(out, "{},{label}", item.score()).expect("writing to a String");
    }
    out
}
