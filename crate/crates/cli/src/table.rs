//! Tabular output in CSV or JSON.
//!
//! Floats are written with 17 significant digits so every value survives a
//! round trip. CSV files start with a `#`-prefixed metadata block; JSON files
//! hold one document with `meta`, `columns` and `rows`.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json_text(&self) -> String {
        match self {
            Cell::Float(x) if x.is_finite() => format_float(*x),
            Cell::Float(_) | Cell::Empty => "null".into(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("string serializes"),
        }
    }

    fn from_json(v: &Value) -> Cell {
        match v {
            Value::Null => Cell::Empty,
            Value::Bool(b) => Cell::Bool(*b),
            Value::Number(n) => match n.as_i64() {
                Some(i) if !n.to_string().contains(['.', 'e', 'E']) => Cell::Int(i),
                _ => Cell::Float(n.as_f64().unwrap_or(f64::NAN)),
            },
            Value::String(s) => Cell::Text(s.clone()),
            other => Cell::Text(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Self { columns: columns.iter().map(|c| c.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }
}

fn meta_lines(meta: &Map<String, Value>) -> Vec<String> {
    let mut out = Vec::new();
    for (k, v) in meta {
        match v {
            Value::Object(inner) => {
                for (ik, iv) in inner {
                    out.push(format!("# {k}.{ik} = {}", scalar_text(iv)));
                }
            }
            other => out.push(format!("# {k} = {}", scalar_text(other))),
        }
    }
    out
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format_float(x),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

pub fn render_csv(table: &Table, meta: &Map<String, Value>) -> String {
    let mut text = String::new();
    for line in meta_lines(meta) {
        text.push_str(&line);
        text.push('\n');
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&table.columns).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv_text)).expect("in-memory write");
    }
    let body = w.into_inner().expect("in-memory flush");
    text.push_str(std::str::from_utf8(&body).expect("utf-8 input"));
    text
}

pub fn render_json(table: &Table, meta: &Map<String, Value>) -> String {
    let mut text = String::from("{\n  \"meta\": ");
    text.push_str(&serde_json::to_string(meta).expect("meta serializes"));
    text.push_str(",\n  \"columns\": ");
    text.push_str(&serde_json::to_string(&table.columns).expect("columns serialize"));
    text.push_str(",\n  \"rows\": [");
    for (i, row) in table.rows.iter().enumerate() {
        text.push_str(if i == 0 { "\n    {" } else { ",\n    {" });
        for (j, (col, cell)) in table.columns.iter().zip(row).enumerate() {
            if j > 0 {
                text.push_str(", ");
            }
            text.push_str(&serde_json::to_string(col).expect("column name serializes"));
            text.push_str(": ");
            text.push_str(&cell.json_text());
        }
        text.push('}');
    }
    text.push_str(if table.rows.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    text
}

pub fn render(table: &Table, meta: &Map<String, Value>, format: Format) -> String {
    match format {
        Format::Csv => render_csv(table, meta),
        Format::Json => render_json(table, meta),
    }
}

/// Writes the table to `path`, or to stdout when `path` is `None`.
pub fn write_table(table: &Table, meta: &Map<String, Value>, format: Format, path: Option<&Path>) -> Result<(), String> {
    let text = render(table, meta, format);
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    }
}

/// Parses a document produced by [`render_json`].
pub fn parse_json(text: &str) -> Result<(Map<String, Value>, Table), String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let meta = doc.get("meta").and_then(Value::as_object).cloned().ok_or("missing meta")?;
    let columns: Vec<String> = doc
        .get("columns")
        .and_then(Value::as_array)
        .ok_or("missing columns")?
        .iter()
        .map(|c| c.as_str().map(str::to_string).ok_or("column names must be strings"))
        .collect::<Result<_, _>>()?;
    let mut table = Table { columns, rows: Vec::new() };
    for row in doc.get("rows").and_then(Value::as_array).ok_or("missing rows")? {
        let obj = row.as_object().ok_or("rows must be objects")?;
        table
            .rows
            .push(table.columns.iter().map(|c| obj.get(c).map_or(Cell::Empty, Cell::from_json)).collect());
    }
    Ok((meta, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["x", "n", "ok", "label", "gap"]);
        t.push(vec![0.1.into(), 3usize.into(), true.into(), "a,b".into(), Cell::Empty]);
        t.push(vec![(-2.0f64 / 3.0).into(), 0usize.into(), false.into(), "plain".into(), 1e-300.into()]);
        t
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        let x = std::f64::consts::PI;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn json_round_trip() {
        let mut meta = Map::new();
        meta.insert("seed".into(), Value::from(7));
        let t = sample();
        let (m, back) = parse_json(&render_json(&t, &meta)).unwrap();
        assert_eq!(back, t);
        assert_eq!(m, meta);
    }

    #[test]
    fn empty_tables() {
        let t = Table::new(&["a", "b"]);
        let meta = Map::new();
        assert_eq!(render_csv(&t, &meta), "a,b\n");
        let (_, back) = parse_json(&render_json(&t, &meta)).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn csv_quotes_and_metadata() {
        let mut meta = Map::new();
        meta.insert("command".into(), Value::from("ground"));
        let text = render_csv(&sample(), &meta);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# command = ground");
        assert_eq!(lines[1], "x,n,ok,label,gap");
        assert!(lines[2].contains("\"a,b\""));
        assert!(!text.contains('\r'));
    }
}
