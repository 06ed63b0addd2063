//! Plain-text tables: `#`-prefixed `key = value` metadata lines, a header
//! row and comma-separated rows with 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use braggstack::{SpectrumRow, SpectrumTable};

use crate::error::CliError;

pub const SPECTRUM_HEADER: [&str; 5] = ["delta_over_gamma", "R", "T", "A", "phi_rad"];

/// A parsed table of any column layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn clean(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

pub fn format_table(metadata: &[(String, String)], header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for (k, v) in metadata {
        let _ = writeln!(out, "# {} = {}", clean(k), clean(v));
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(row.iter().map(|x| format!("{x:.16e}")))
            .expect("writing to memory");
    }
    let body = w.into_inner().expect("writing to memory");
    out.push_str(std::str::from_utf8(&body).expect("fields are ASCII"));
    out
}

pub fn parse_table(text: &str, source: &str) -> Result<Table, CliError> {
    let err = |line: usize, message: String| CliError::Csv {
        path: source.to_string(),
        line,
        message,
    };
    let mut metadata = Vec::new();
    let mut body = text;
    while let Some(rest) = body.strip_prefix("# ") {
        let n = metadata.len() + 1;
        let (line, tail) = rest.split_once('\n').unwrap_or((rest, ""));
        let (k, v) = line
            .split_once(" = ")
            .ok_or_else(|| err(n, "metadata line without ' = '".into()))?;
        metadata.push((k.to_string(), v.trim_end_matches('\r').to_string()));
        body = tail;
    }
    let offset = metadata.len();
    let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| err(offset + 1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.iter().all(String::is_empty) {
        return Err(err(offset + 1, "missing header".into()));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            err(offset + line, e.to_string())
        })?;
        let n = offset + record.position().map_or(0, |p| p.line() as usize);
        let row = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| err(n, format!("bad number {f:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(Table { metadata, header, rows })
}

pub fn format_spectrum(table: &SpectrumTable) -> String {
    let rows: Vec<Vec<f64>> = table
        .rows
        .iter()
        .map(|r| vec![r.delta_over_gamma, r.big_r, r.big_t, r.big_a, r.phi])
        .collect();
    format_table(&table.metadata, &SPECTRUM_HEADER, &rows)
}

pub fn parse_spectrum(text: &str, source: &str) -> Result<SpectrumTable, CliError> {
    let t = parse_table(text, source)?;
    if t.header != SPECTRUM_HEADER {
        return Err(CliError::Csv {
            path: source.to_string(),
            line: t.metadata.len() + 1,
            message: format!("expected header {}", SPECTRUM_HEADER.join(",")),
        });
    }
    let rows = t
        .rows
        .iter()
        .map(|r| SpectrumRow {
            delta_over_gamma: r[0],
            big_r: r[1],
            big_t: r[2],
            big_a: r[3],
            phi: r[4],
        })
        .collect();
    Ok(SpectrumTable {
        rows,
        metadata: t.metadata,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn write_spectrum_csv(table: &SpectrumTable, path: &Path) -> Result<(), CliError> {
    write_file(path, &format_spectrum(table))
}

pub fn read_spectrum_csv(path: &Path) -> Result<SpectrumTable, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_spectrum(&text, &path.display().to_string())
}
