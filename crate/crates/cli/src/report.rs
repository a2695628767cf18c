//! Command reports and their text, JSON and CSV renderings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};
use shiftlab_core::exact::Scalar;

use crate::error::{CliError, CliResult};

/// Rows for the CSV and text renderings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    /// Truncation used for every verdict in the report.
    pub window: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    #[serde(skip)]
    pub table: Table,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            inputs: Value::Object(Map::new()),
            window: Value::Null,
            holds: None,
            result: Value::Null,
            timing_ms: None,
            table: Table::default(),
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        if let Value::Object(map) = &mut self.inputs {
            map.insert(key.into(), to_value(value));
        }
        self
    }

    pub fn window(mut self, value: impl Serialize) -> Self {
        self.window = to_value(value);
        self
    }

    pub fn holds(mut self, holds: bool) -> Self {
        self.holds = Some(holds);
        self
    }

    pub fn result(mut self, value: impl Serialize) -> Self {
        self.result = to_value(value);
        self
    }

    pub fn table(mut self, table: Table) -> Self {
        self.table = table;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let write_err = |e: csv::Error| CliError::Io {
            path: "<csv>".into(),
            message: e.to_string(),
        };
        w.write_record(&self.table.header).map_err(write_err)?;
        for row in &self.table.rows {
            w.write_record(row).map_err(write_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io {
            path: "<csv>".into(),
            message: e.to_string(),
        })?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        if !self.window.is_null() {
            writeln!(out, "window: {}", compact(&self.window)).unwrap();
        }
        if let Some(h) = self.holds {
            writeln!(out, "holds: {h}").unwrap();
        }
        if let Some(ms) = self.timing_ms {
            writeln!(out, "time: {ms} ms").unwrap();
        }
        if !self.table.header.is_empty() {
            let widths: Vec<usize> = (0..self.table.header.len())
                .map(|c| {
                    std::iter::once(&self.table.header)
                        .chain(&self.table.rows)
                        .filter_map(|r| r.get(c))
                        .map(|s| s.chars().count())
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            for row in std::iter::once(&self.table.header).chain(&self.table.rows) {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(cell, w)| format!("{cell:<w$}"))
                    .collect();
                writeln!(out, "{}", line.join("  ").trim_end()).unwrap();
            }
        }
        out
    }

    /// Fails if any rational in the report has a denominator above `cap` bits.
    pub fn check_denominators(&self, cap: u64) -> CliResult<()> {
        let value = to_value(self);
        walk(&value, "$", cap)?;
        for (r, row) in self.table.rows.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                check_cell(cell, &format!("row {r} column {c}"), cap)?;
            }
        }
        Ok(())
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}: {}", compact(v)))
            .collect::<Vec<_>>()
            .join(", "),
        other => other.to_string(),
    }
}

fn walk(v: &Value, path: &str, cap: u64) -> CliResult<()> {
    match v {
        Value::String(s) => check_cell(s, path, cap),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .try_for_each(|(i, x)| walk(x, &format!("{path}[{i}]"), cap)),
        Value::Object(map) => map
            .iter()
            .try_for_each(|(k, x)| walk(x, &format!("{path}.{k}"), cap)),
        _ => Ok(()),
    }
}

fn check_cell(cell: &str, path: &str, cap: u64) -> CliResult<()> {
    if !cell.contains('/') {
        return Ok(());
    }
    if let Ok(x) = cell.parse::<Scalar>() {
        let bits = x.denom_bits();
        if bits > cap {
            return Err(CliError::DenominatorCap {
                value: cell.into(),
                path: path.into(),
                bits,
                cap,
            });
        }
    }
    Ok(())
}

/// Squared-weight grids as nested string lists.
pub fn grid_value(grid: &[Vec<Scalar>]) -> Value {
    to_value(grid)
}
