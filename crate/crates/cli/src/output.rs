//! Tables and their CSV / JSON encodings.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Self::Int(i) => i.to_string(),
            Self::Float(x) => format_float(*x),
            Self::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Int(i) => Value::from(*i),
            Self::Float(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Self::Bool(b) => Value::Bool(*b),
        }
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(w);
        let encode = |e: csv::Error| CliError::Validation(format!("output: {e}"));
        out.write_record(&self.columns).map_err(encode)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::csv)).map_err(encode)?;
        }
        out.flush()?;
        Ok(())
    }

    /// An array of row objects keyed by column name; non-finite floats
    /// become `null`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write<W: Write>(&self, format: Format, mut w: W) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, &self.to_json())
                    .map_err(|e| CliError::Validation(format!("output: {e}")))?;
                writeln!(w)?;
                Ok(())
            }
        }
    }
}

/// `Phi, q1..qn, p1..pn`.
pub fn coordinate_columns(n: usize) -> Vec<String> {
    std::iter::once("Phi".to_string())
        .chain((1..=n).map(|i| format!("q{i}")))
        .chain((1..=n).map(|i| format!("p{i}")))
        .collect()
}
