//! Ballot-table parsing: CSV with an `entity` label column followed by one
//! column per ranker; empty cells or `NA` mean "not ranked".

use std::path::Path;

use rankci::{Orientation, RankMatrix};

use crate::error::CliError;

pub fn parse_input(path: &Path, orientation: Orientation) -> Result<RankMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_input_str(&text, orientation, &path.display().to_string())
}

pub fn parse_input_str(
    text: &str,
    orientation: Orientation,
    path: &str,
) -> Result<RankMatrix, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| CliError::Csv {
            path: path.to_string(),
            message: e.to_string(),
        })?
        .clone();
    if headers.len() < 2 {
        return Err(CliError::Csv {
            path: path.to_string(),
            message: "need an entity column plus at least one ranker column".into(),
        });
    }

    let mut labels: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<Option<u32>>> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Csv {
            path: path.to_string(),
            message: e.to_string(),
        })?;
        let label = record.get(0).unwrap_or_default().to_string();
        if label.is_empty() {
            return Err(CliError::BadCell {
                row: row_idx + 2, // 1-based, after header
                column: 1,
                message: "empty entity label".into(),
            });
        }
        if labels.contains(&label) {
            return Err(CliError::DuplicateLabel { label });
        }
        let mut cells = Vec::with_capacity(headers.len() - 1);
        for col in 1..headers.len() {
            let raw = record.get(col).unwrap_or_default();
            let cell = if raw.is_empty() || raw.eq_ignore_ascii_case("na") {
                None
            } else {
                let value: u32 = raw.parse().map_err(|_| CliError::BadCell {
                    row: row_idx + 2,
                    column: col + 1,
                    message: format!("expected a positive integer rank or NA, got {raw:?}"),
                })?;
                Some(value)
            };
            cells.push(cell);
        }
        labels.push(label);
        rows.push(cells);
    }
    if labels.is_empty() {
        return Err(CliError::EmptyInput);
    }
    Ok(RankMatrix::new(labels, rows, orientation)?)
}
