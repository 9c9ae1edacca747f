use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ExperimentRow;
use crate::energy::Method;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "scenario_id,D,n,k,kl,method,alpha,rejection_rate,mc_reps,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn render_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let alpha = r.alpha.map(fmt_f64).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.scenario_id,
            r.dim,
            r.n,
            fmt_f64(r.k),
            fmt_f64(r.kl),
            r.method,
            alpha,
            fmt_f64(r.rejection_rate),
            r.mc_reps,
            r.seed
        ));
    }
    out
}

/// Serializes rows; the same rows always produce the same bytes.
pub fn write_results_to<W: Write>(rows: &[ExperimentRow], format: OutputFormat, mut w: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("no result rows to write".into()));
    }
    match format {
        OutputFormat::Csv => w.write_all(render_csv(rows).as_bytes())?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            w.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub fn write_results(rows: &[ExperimentRow], format: OutputFormat, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_results_to(rows, format, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn read_results_json(path: &Path) -> Result<Vec<ExperimentRow>> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}

pub fn read_results_csv(path: &Path) -> Result<Vec<ExperimentRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::InvalidArgument(format!(
            "unexpected header {:?}",
            header.join(",")
        )));
    }
    let display = path.display().to_string();
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let row = i + 2;
        let field = |c: usize| rec.get(c).unwrap_or("");
        let bad = |c: usize, what: &str| Error::Parse {
            path: display.clone(),
            row,
            column: c + 1,
            message: format!("invalid {what}: {:?}", rec.get(c).unwrap_or("")),
        };
        let num = |c: usize| field(c).parse::<f64>().map_err(|_| bad(c, "number"));
        let int = |c: usize| field(c).parse::<u64>().map_err(|_| bad(c, "integer"));
        rows.push(ExperimentRow {
            scenario_id: int(0)? as u8,
            dim: int(1)? as usize,
            n: int(2)? as usize,
            k: num(3)?,
            kl: num(4)?,
            method: field(5).parse::<Method>().map_err(|_| bad(5, "method"))?,
            alpha: if field(6).is_empty() { None } else { Some(num(6)?) },
            rejection_rate: num(7)?,
            mc_reps: int(8)? as usize,
            seed: int(9)?,
        });
    }
    Ok(rows)
}
