//! Typed record tables and their table/CSV/NDJSON renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Fits in `i64`; emitted as a JSON number.
    Int,
    /// Arbitrary integer; emitted as a decimal string.
    Big,
    Bool,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Column {
    pub name: &'static str,
    pub kind: Kind,
}

pub const fn col(name: &'static str, kind: Kind) -> Column {
    Column { name, kind }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Null,
    Int(i64),
    Big(String),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn big(v: impl ToString) -> Self {
        Cell::Big(v.to_string())
    }

    pub fn text(v: impl Into<String>) -> Self {
        Cell::Text(v.into())
    }

    pub fn int(v: impl TryInto<i64>) -> Self {
        v.try_into().map(Cell::Int).unwrap_or(Cell::Null)
    }

    pub fn opt<T>(v: Option<T>, f: impl FnOnce(T) -> Cell) -> Self {
        v.map(f).unwrap_or(Cell::Null)
    }

    fn plain(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Big(s) | Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Null => "null".into(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Big(s) | Cell::Text(s) => Value::String(s.clone()).to_string(),
        }
    }
}

/// Row classification that drives the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Skipped,
    RedFlag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub statuses: Vec<Status>,
}

impl Table {
    pub fn new(columns: &[Column]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
            statuses: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>, status: Status) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
        self.statuses.push(status);
    }

    pub fn worst(&self) -> Status {
        self.statuses.iter().copied().max().unwrap_or(Status::Ok)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Table => Ok(self.to_text()),
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json_lines()),
        }
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push('{');
            for (i, (c, cell)) in self.columns.iter().zip(row).enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "\"{}\":{}", c.name, cell.json());
            }
            out.push_str("}\n");
        }
        out
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Necessary)
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::plain))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| match c {
                        Cell::Null => "-".to_string(),
                        other => other.plain(),
                    })
                    .collect()
            })
            .collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.name.len()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, items: &mut dyn Iterator<Item = &str>| {
            let parts: Vec<String> = items
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}", w = *w))
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(&mut out, &mut self.columns.iter().map(|c| c.name));
        for row in &cells {
            line(&mut out, &mut row.iter().map(String::as_str));
        }
        out
    }

    pub fn parse_json_lines(columns: &[Column], text: &str) -> Result<Vec<Vec<Cell>>, CliError> {
        let mut rows = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let v: Value = serde_json::from_str(line).map_err(|e| CliError::Parse(e.to_string()))?;
            let obj = v.as_object().ok_or_else(|| CliError::Parse("record is not an object".into()))?;
            if obj.len() != columns.len() {
                return Err(CliError::Parse(format!("expected {} fields, got {}", columns.len(), obj.len())));
            }
            let mut row = Vec::with_capacity(columns.len());
            for c in columns {
                let field = obj
                    .get(c.name)
                    .ok_or_else(|| CliError::Parse(format!("missing field {}", c.name)))?;
                row.push(match (c.kind, field) {
                    (_, Value::Null) => Cell::Null,
                    (Kind::Int, Value::Number(n)) => {
                        Cell::Int(n.as_i64().ok_or_else(|| CliError::Parse(format!("{} out of range", c.name)))?)
                    }
                    (Kind::Big, Value::String(s)) => Cell::Big(s.clone()),
                    (Kind::Bool, Value::Bool(b)) => Cell::Bool(*b),
                    (Kind::Text, Value::String(s)) => Cell::Text(s.clone()),
                    (_, other) => return Err(CliError::Parse(format!("field {} has unexpected value {other}", c.name))),
                });
            }
            rows.push(row);
        }
        Ok(rows)
    }

    pub fn parse_csv(columns: &[Column], text: &str) -> Result<Vec<Vec<Cell>>, CliError> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        if headers.iter().ne(columns.iter().map(|c| c.name)) {
            return Err(CliError::Parse("header mismatch".into()));
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record?;
            let mut row = Vec::with_capacity(columns.len());
            for (c, raw) in columns.iter().zip(record.iter()) {
                row.push(if raw.is_empty() {
                    Cell::Null
                } else {
                    match c.kind {
                        Kind::Int => Cell::Int(raw.parse().map_err(|_| CliError::Parse(format!("bad integer {raw:?}")))?),
                        Kind::Big => Cell::Big(raw.to_string()),
                        Kind::Bool => Cell::Bool(raw.parse().map_err(|_| CliError::Parse(format!("bad bool {raw:?}")))?),
                        Kind::Text => Cell::Text(raw.to_string()),
                    }
                });
            }
            rows.push(row);
        }
        Ok(rows)
    }
}


#[cfg(test)]
mod round_trip {
    use super::*;
    use proptest::prelude::*;

    const COLS: [Column; 4] = [
        col("a", Kind::Int),
        col("b", Kind::Big),
        col("c", Kind::Bool),
        col("d", Kind::Text),
    ];

    fn row() -> impl Strategy<Value = Vec<Cell>> {
        (
            prop::option::of(any::<i64>()),
            prop::option::of(any::<i128>()),
            prop::option::of(any::<bool>()),
            prop::option::of("[ -~]{1,20}|\"[a-z,]*\"\n?"),
        )
            .prop_map(|(a, b, c, d)| {
                vec![
                    Cell::opt(a, Cell::Int),
                    Cell::opt(b, Cell::big),
                    Cell::opt(c, Cell::Bool),
                    Cell::opt(d, Cell::Text),
                ]
            })
    }

    proptest! {
        #[test]
        fn json_and_csv_reparse_exactly(rows in prop::collection::vec(row(), 0..12)) {
            let mut t = Table::new(&COLS);
            for r in rows {
                t.push(r, Status::Ok);
            }
            prop_assert_eq!(&Table::parse_json_lines(&COLS, &t.to_json_lines()).unwrap(), &t.rows);
            prop_assert_eq!(&Table::parse_csv(&COLS, &t.to_csv().unwrap()).unwrap(), &t.rows);
        }
    }
}
