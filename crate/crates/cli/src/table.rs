//! Tabular output in text, CSV and JSON.

use std::io::{self, Write};

use clap::ValueEnum;
use ncplanck::algebra::format_real;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

/// Rounds to `digits` significant digits.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits - 1, v).parse().unwrap_or(v)
}

impl Cell {
    fn render(&self, precision: usize) -> String {
        match self {
            Cell::Num(v) => format_real(round_sig(*v, precision)),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self, precision: usize) -> Value {
        match self {
            Cell::Num(v) => Number::from_f64(round_sig(*v, precision))
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, out: &mut W, format: OutputFormat, precision: usize) -> io::Result<()> {
        match format {
            OutputFormat::Text => self.write_text(out, precision),
            OutputFormat::Csv => self.write_csv(out, precision),
            OutputFormat::Json => self.write_json(out, precision),
        }
    }

    fn write_text<W: Write>(&self, out: &mut W, precision: usize) -> io::Result<()> {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.render(precision)).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, h)| cells.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
            .collect();
        let line = |fields: Vec<String>| {
            fields
                .iter()
                .zip(&widths)
                .map(|(f, w)| format!("{f:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(out, "{}", line(self.columns.iter().map(|s| s.to_string()).collect()))?;
        for row in cells {
            writeln!(out, "{}", line(row))?;
        }
        Ok(())
    }

    fn write_csv<W: Write>(&self, out: &mut W, precision: usize) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render(precision)))?;
        }
        w.flush()
    }

    fn write_json<W: Write>(&self, out: &mut W, precision: usize) -> io::Result<()> {
        let array: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (k, c) in self.columns.iter().zip(row) {
                    obj.insert(k.to_string(), c.json(precision));
                }
                Value::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut *out, &Value::Array(array))?;
        writeln!(out)
    }
}
