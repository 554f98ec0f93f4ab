//! Tables written as CSV with a trailing `#` metadata block, or as JSON.

use std::io::Write;

use serde::Serialize;

use crate::config::Format;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Ordered key/value pairs; emitted after the rows in CSV.
    pub meta: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), meta: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    /// Cells use `Debug` for f64: shortest round-trip digits, exponent form
    /// for very small or large magnitudes.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            columns: &'a [String],
            rows: &'a [Vec<f64>],
            meta: serde_json::Map<String, serde_json::Value>,
        }
        let meta = self.meta.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
        let doc = Doc { columns: &self.columns, rows: &self.rows, meta };
        serde_json::to_string_pretty(&doc).expect("table serializes") + "\n"
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Writes to `path`, or to standard output when `None`.
pub fn emit(text: &str, path: Option<&str>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_string(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["x", "y"]);
        t.push(vec![0.1, 1.0 / 3.0]);
        t.meta("seed", 7);
        let s = t.to_csv();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "x,y");
        assert_eq!(lines[1].split(',').nth(1).unwrap().parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(lines[2], "# seed=7");
        let mut tiny = Table::new(&["x"]);
        tiny.push(vec![1.25e-15]);
        assert_eq!(tiny.to_csv().lines().nth(1).unwrap(), "1.25e-15");
    }

    #[test]
    fn json_mirrors_csv() {
        let mut t = Table::new(&["x"]);
        t.push(vec![2.5]);
        t.meta("version", "0.1.0");
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"][0][0], 2.5);
        assert_eq!(v["meta"]["version"], "0.1.0");
    }
}
