//! CSV ingestion for the two yearly schemas.

use std::path::Path;

use csv::{ReaderBuilder, Trim};

use crate::CliError;

/// Which value column a file must carry next to `year`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    /// `year,rate`, rates as decimal fractions.
    Returns,
    /// `year,value`.
    YearlyValues,
}

impl Schema {
    pub fn value_column(self) -> &'static str {
        match self {
            Schema::Returns => "rate",
            Schema::YearlyValues => "value",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub year: i32,
    pub value: f64,
    /// 1-based line in the source file.
    pub line: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    pub header: Vec<String>,
    /// Sorted by year.
    pub rows: Vec<Row>,
}

impl DataTable {
    pub fn years(&self) -> Vec<i32> {
        self.rows.iter().map(|r| r.year).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }
}

pub fn parse_csv(path: &Path, schema: Schema, percent: bool) -> Result<DataTable, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_csv_bytes(&bytes, schema, percent).map_err(|e| match e {
        CliError::Parse { line, msg, .. } => CliError::Parse {
            origin: path.display().to_string(),
            line,
            msg,
        },
        other => other,
    })
}

/// Parses CSV text already in memory. Extra columns are ignored.
pub fn parse_csv_bytes(bytes: &[u8], schema: Schema, percent: bool) -> Result<DataTable, CliError> {
    let err = |line: u64, msg: String| CliError::Parse {
        origin: "<input>".into(),
        line,
        msg,
    };
    if bytes.iter().all(|b| b.is_ascii_whitespace()) {
        return Err(err(1, "empty file".into()));
    }
    // The reader counts lines by `\n` only after a `\r\n` pair has been seen
    // once, so normalize endings first to keep reported line numbers right.
    let text: Vec<u8> = strip_cr(bytes);
    let mut reader = ReaderBuilder::new()
        .has_headers(true)
        .trim(Trim::All)
        .from_reader(text.as_slice());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| err(csv_line(&e).unwrap_or(1), e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| err(1, format!("header has no `{name}` column")))
    };
    let year_col = find("year")?;
    let value_col = find(schema.value_column())?;
    let scale = if percent { 0.01 } else { 1.0 };

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| err(csv_line(&e).unwrap_or(0), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let year_text = &record[year_col];
        let year: i32 = year_text
            .parse()
            .map_err(|_| err(line, format!("year `{year_text}` is not an integer")))?;
        let value_text = &record[value_col];
        let value: f64 = value_text
            .parse()
            .map_err(|_| err(line, format!("`{value_text}` is not a number")))?;
        if !value.is_finite() {
            return Err(err(line, format!("`{value_text}` is not finite")));
        }
        rows.push(Row {
            year,
            value: value * scale,
            line,
        });
    }
    if rows.is_empty() {
        return Err(err(1, "no data rows".into()));
    }
    rows.sort_by_key(|r| r.year);
    Ok(DataTable { header, rows })
}

fn strip_cr(bytes: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(bytes.len());
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'\r' && bytes.get(i + 1) == Some(&b'\n') {
            continue;
        }
        out.push(b);
    }
    out
}

fn csv_line(e: &csv::Error) -> Option<u64> {
    e.position().map(|p| p.line())
}
