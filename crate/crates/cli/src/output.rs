//! Report tables and their CSV/JSON serialization.
//!
//! Floats are written with 17 significant digits in scientific notation, so
//! files are locale-independent and byte-identical across runs.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Flag(bool),
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Flag(v) => v.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        use serde_json::Value;
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            // reparsing the fixed-width text keeps JSON and CSV in agreement
            Cell::Num(v) if v.is_finite() => serde_json::from_str(&fmt_num(*v)).unwrap_or(Value::Null),
            Cell::Num(_) => Value::Null,
            Cell::Int(v) => Value::from(*v),
            Cell::Flag(v) => Value::Bool(*v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> io::Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::text))?;
                }
                w.into_inner().map_err(|e| io::Error::other(e.to_string()))
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|r| serde_json::Value::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                let doc = serde_json::json!({
                    "report": self.name,
                    "columns": self.columns,
                    "rows": rows,
                });
                let mut buf = serde_json::to_vec_pretty(&doc)?;
                buf.push(b'\n');
                Ok(buf)
            }
        }
    }
}

/// Writes every table atomically into `dir`, returning the paths written.
pub fn write_tables(dir: &Path, tables: &[Table], format: Format) -> io::Result<Vec<PathBuf>> {
    let rendered = tables
        .iter()
        .map(|t| t.render(format))
        .collect::<io::Result<Vec<_>>>()?;
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for (t, bytes) in tables.iter().zip(rendered) {
        let path = dir.join(format!("{}.{}", t.name, format.extension()));
        let tmp = dir.join(format!(".{}.{}.tmp", t.name, format.extension()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        out.push(path);
    }
    Ok(out)
}

/// `1.5` → `1.5`, `0.25` → `0.25`: shortest text for file names.
pub fn tag_num(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", &["case_id", "value", "pass"]);
        t.push(vec!["a,b".into(), 0.1.into(), true.into()]);
        t.push(vec!["c".into(), f64::NAN.into(), false.into()]);
        t
    }

    #[test]
    fn csv_uses_seventeen_digits_and_quotes() {
        let text = String::from_utf8(sample().render(Format::Csv).unwrap()).unwrap();
        assert_eq!(
            text,
            "case_id,value,pass\n\"a,b\",1.0000000000000001e-1,true\nc,nan,false\n"
        );
    }

    #[test]
    fn json_keeps_column_order() {
        let v: serde_json::Value = serde_json::from_slice(&sample().render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["columns"][1], "value");
        assert_eq!(v["rows"][0][1].as_f64().unwrap(), 0.1);
        assert!(v["rows"][1][1].is_null());
    }

    #[test]
    fn writes_named_files() {
        let dir = tempfile::tempdir().unwrap();
        let paths = write_tables(dir.path(), &[sample()], Format::Csv).unwrap();
        assert_eq!(paths[0], dir.path().join("demo.csv"));
        assert!(paths[0].exists());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
