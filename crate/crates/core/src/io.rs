//! CSV ingestion of compositional datasets.

use std::path::Path;

use crate::error::{Error, Result};
use crate::simplex::{close, CompositionalDataset};

/// Reads one observation per line with an optional header line, recognized
/// by having no numeric field. Each row is closed on ingestion. Row and
/// column numbers in errors are 1-based and count the header line.
pub fn read_dataset_csv(path: &Path) -> Result<CompositionalDataset> {
    let reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)?;
    parse_records(reader, &path.display().to_string())
}

/// Same contract as [`read_dataset_csv`] for in-memory text.
pub fn parse_dataset_csv(text: &str, source: &str) -> Result<CompositionalDataset> {
    let reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    parse_records(reader, source)
}

fn parse_records<R: std::io::Read>(mut reader: csv::Reader<R>, source: &str) -> Result<CompositionalDataset> {
    let parse_error = |row: usize, column: usize, message: String| Error::Parse {
        path: source.to_string(),
        row,
        column,
        message,
    };
    let mut names = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record = record?;
        let line = index + 1;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Vec<std::result::Result<f64, _>> = record.iter().map(str::parse::<f64>).collect();
        if index == 0 && parsed.iter().all(|p| p.is_err()) {
            names = Some(record.iter().map(str::to_string).collect::<Vec<_>>());
            continue;
        }
        let mut values = Vec::with_capacity(parsed.len());
        for (c, (p, field)) in parsed.into_iter().zip(record.iter()).enumerate() {
            match p {
                Ok(v) => values.push(v),
                Err(_) => return Err(parse_error(line, c + 1, format!("not a number: {field:?}"))),
            }
        }
        if let Some(first) = rows.first() {
            if first.len() != values.len() {
                return Err(parse_error(
                    line,
                    values.len().min(first.len()) + 1,
                    format!("expected {} columns, found {}", first.len(), values.len()),
                ));
            }
        }
        let closed = close(&values).map_err(|e| {
            let column = match e {
                Error::NegativeComponent { index, .. } | Error::NonFinite { index } => index + 1,
                _ => 1,
            };
            parse_error(line, column, e.to_string())
        })?;
        rows.push(closed.into_vec());
    }
    if rows.is_empty() {
        return Err(parse_error(1, 1, "no data rows".into()));
    }
    let data = CompositionalDataset::from_rows(&rows)?;
    match names {
        Some(n) if n.len() == data.dim() => data.with_names(n),
        Some(n) => Err(parse_error(
            1,
            1,
            format!("header has {} columns, data has {}", n.len(), data.dim()),
        )),
        None => Ok(data),
    }
}
