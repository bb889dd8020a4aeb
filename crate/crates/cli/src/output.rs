//! Rendering of command results as text, CSV or JSON.
//!
//! Floats in CSV and JSON are written with 17 significant digits so that
//! every value round-trips exactly. Text output uses the shortest
//! round-trip representation.

use clap::ValueEnum;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => sci(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:?}"),
            other => other.csv(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(v) if v.is_finite() => {
                let raw = RawValue::from_string(sci(*v)).map_err(serde::ser::Error::custom)?;
                raw.serialize(s)
            }
            Cell::Num(_) | Cell::Empty => s.serialize_none(),
            Cell::Int(v) => s.serialize_u64(*v),
            Cell::Bool(v) => s.serialize_bool(*v),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

/// Ordered key/value pairs, serialized as a JSON object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Cell)>);

impl Record {
    pub fn push(&mut self, key: &str, value: impl Into<Cell>) {
        self.0.push((key.to_string(), value.into()));
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Record,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    metadata: &'a Record,
    columns: &'a [&'static str],
    rows: Vec<Record>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Single(Record),
    Table(Table),
}

impl Report {
    /// Text for single-point results, CSV for tables.
    pub fn default_format(&self) -> Format {
        match self {
            Report::Single(_) => Format::Text,
            Report::Table(_) => Format::Csv,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let mut out = match (self, format) {
            (Report::Single(r), Format::Text) => {
                r.0.iter().map(|(k, v)| format!("{k} = {}\n", v.text())).collect::<String>()
            }
            (Report::Single(r), Format::Csv) => {
                let header: Vec<_> = r.0.iter().map(|(k, _)| k.as_str()).collect();
                let values: Vec<_> = r.0.iter().map(|(_, v)| v.csv()).collect();
                format!("{}\n{}\n", header.join(","), values.join(","))
            }
            (Report::Single(r), Format::Json) => to_json(r)?,
            (Report::Table(t), Format::Csv) => {
                let mut s = t.columns.join(",");
                s.push('\n');
                for row in &t.rows {
                    let cells: Vec<_> = row.iter().map(Cell::csv).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            (Report::Table(t), Format::Json) => {
                let rows = t
                    .rows
                    .iter()
                    .map(|row| Record(t.columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect()))
                    .collect();
                to_json(&TableJson { metadata: &t.metadata, columns: &t.columns, rows })?
            }
            (Report::Table(_), Format::Text) => {
                return Err(CliError::invalid("tabular output supports --format csv or json, not text"))
            }
        };
        if !out.ends_with('\n') {
            out.push('\n');
        }
        Ok(out)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::invalid(format!("JSON encoding failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        Table {
            metadata: Record(vec![("kind".into(), "map".into())]),
            columns: vec!["a", "status"],
            rows: vec![vec![Cell::Num(0.1), "stable".into()], vec![Cell::Empty, "unphysical".into()]],
        }
    }

    #[test]
    fn csv_has_seventeen_digits() {
        let s = Report::Table(table()).render(Format::Csv).unwrap();
        assert_eq!(s, "a,status\n1.0000000000000001e-1,stable\n,unphysical\n");
        let v: f64 = s.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
        assert_eq!(v, 0.1);
    }

    #[test]
    fn json_round_trips() {
        let s = Report::Table(table()).render(Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["rows"][0]["a"].as_f64(), Some(0.1));
        assert!(v["rows"][1]["a"].is_null());
        assert_eq!(v["metadata"]["kind"], "map");
    }

    #[test]
    fn single_record_formats() {
        let mut r = Record::default();
        r.push("sql", 1.0);
        r.push("stable", true);
        let rep = Report::Single(r);
        assert_eq!(rep.render(Format::Text).unwrap(), "sql = 1.0\nstable = true\n");
        assert_eq!(rep.render(Format::Csv).unwrap(), "sql,stable\n1.0000000000000000e0,true\n");
        assert!(Report::Table(table()).render(Format::Text).is_err());
    }
}
