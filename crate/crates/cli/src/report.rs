//! Output documents: sorted-key JSON with numbers as 17-significant-digit
//! strings, or CSV with a header row. Both encodings share the same cells.

use serde_json::{Map, Value};

use crate::args::Format;

/// `x` as a decimal string with 17 significant digits.
pub fn num(x: f64) -> Value {
    Value::String(fmt_num(x))
}

pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        // drop the sign of negative zero
        "0.0000000000000000e0".into()
    } else if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Null,
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(i) => (*i).into(),
            Cell::Text(s) => s.clone().into(),
            Cell::Bool(b) => (*b).into(),
            Cell::Null => Value::Null,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Null, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(k, c)| (k.to_string(), c.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Warn,
    Error,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Warn => "WARN",
            Level::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub level: Level,
    pub message: String,
}

impl Diagnostic {
    /// One line, `WARN: ...` or `ERROR: ...`.
    pub fn line(&self) -> String {
        format!("{}: {}", self.level.as_str(), self.message.replace('\n', " "))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub request: Value,
    /// JSON results; when absent the table is used.
    pub results: Option<Value>,
    pub table: Table,
    pub diagnostics: Vec<Diagnostic>,
}

impl Document {
    pub fn new(request: Value, table: Table) -> Self {
        Self { request, results: None, table, diagnostics: Vec::new() }
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        let message = message.into();
        if !self.diagnostics.iter().any(|d| d.level == Level::Warn && d.message == message) {
            self.diagnostics.push(Diagnostic { level: Level::Warn, message });
        }
    }

    pub fn error(&mut self, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic { level: Level::Error, message: message.into() });
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => {
                let mut top = Map::new();
                top.insert("request".into(), self.request.clone());
                top.insert("results".into(), self.results.clone().unwrap_or_else(|| self.table.to_json()));
                top.insert(
                    "diagnostics".into(),
                    Value::Array(
                        self.diagnostics
                            .iter()
                            .map(|d| {
                                let mut m = Map::new();
                                m.insert("level".into(), d.level.as_str().into());
                                m.insert("message".into(), d.message.clone().into());
                                Value::Object(m)
                            })
                            .collect(),
                    ),
                );
                top.insert("version".into(), env!("CARGO_PKG_VERSION").into());
                let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}
