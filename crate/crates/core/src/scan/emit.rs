//! Tabular CSV and JSON output.

use std::io::{self, Write};

use serde::ser::{Serialize, SerializeMap, SerializeStruct, Serializer};
use serde_json::Value;

use super::{ScanResult, ScanSpec};
use crate::characteristic::Area;

/// One table entry.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Number(f64),
    Label(Area),
    Text(String),
    /// Undefined at this point, or a failed point's quantity column.
    Empty,
}

impl Cell {
    /// Shortest representation that parses back to the same `f64`.
    pub fn csv_field(&self) -> String {
        match self {
            Cell::Number(x) if x.is_finite() => ryu::Buffer::new().format_finite(*x).to_string(),
            Cell::Number(x) if x.is_nan() => "NaN".into(),
            Cell::Number(x) => (if *x > 0.0 { "inf" } else { "-inf" }).into(),
            Cell::Label(a) => a.as_str().into(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Number(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Label(a) => Value::String(a.as_str().into()),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.json().serialize(s)
    }
}

/// Header plus rows of equal width.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Comma-separated, LF-terminated, header first.
    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        w.flush()
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is ascii")
    }
}

/// Serializes a row as an object keyed by column name, in column order.
pub(crate) struct Keyed<'a> {
    pub header: &'a [String],
    pub row: &'a [Cell],
}

impl Serialize for Keyed<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.header.len()))?;
        for (k, v) in self.header.iter().zip(self.row) {
            if *v != Cell::Empty {
                map.serialize_entry(k, v)?;
            }
        }
        map.end()
    }
}

impl ScanResult {
    /// Axes, then quantities, then an `error` column if any point failed.
    /// Rows and failures are merged in grid order.
    pub fn table(&self) -> Table {
        let spec = &self.spec;
        let mut header: Vec<String> = spec.axes().iter().map(|a| a.parameter.as_str().to_string()).collect();
        header.extend(spec.quantities.iter().map(|q| q.as_str().to_string()));
        let with_error = !self.failures.is_empty();
        if with_error {
            header.push("error".into());
        }
        let mut rows = Vec::with_capacity(self.rows.len() + self.failures.len());
        let (mut ok, mut bad) = (self.rows.iter().peekable(), self.failures.iter().peekable());
        loop {
            let take_ok = match (ok.peek(), bad.peek()) {
                (Some(r), Some(f)) => r.index < f.index,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            let mut cells: Vec<Cell>;
            if take_ok {
                let r = ok.next().unwrap();
                cells = r.axes.iter().map(|&x| Cell::Number(x)).collect();
                cells.extend(r.values.iter().cloned());
                if with_error {
                    cells.push(Cell::Empty);
                }
            } else {
                let f = bad.next().unwrap();
                cells = f.axes.iter().map(|&x| Cell::Number(x)).collect();
                cells.extend(spec.quantities.iter().map(|_| Cell::Empty));
                cells.push(Cell::Text(f.error.clone()));
            }
            rows.push(cells);
        }
        Table { header, rows }
    }

    pub fn to_csv(&self) -> String {
        self.table().to_csv()
    }

    /// `{spec, rows, failures, cross_check}`; rows are keyed by column name.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&JsonScan(self)).expect("scan results serialize")
    }
}

struct JsonScan<'a>(&'a ScanResult);

impl Serialize for JsonScan<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = self.0;
        let spec: &ScanSpec = &r.spec;
        let mut header: Vec<String> = spec.axes().iter().map(|a| a.parameter.as_str().to_string()).collect();
        header.extend(spec.quantities.iter().map(|q| q.as_str().to_string()));
        let rows: Vec<Vec<Cell>> = r
            .rows
            .iter()
            .map(|row| {
                let mut cells: Vec<Cell> = row.axes.iter().map(|&x| Cell::Number(x)).collect();
                cells.extend(row.values.iter().cloned());
                cells
            })
            .collect();
        let keyed: Vec<Keyed> = rows.iter().map(|row| Keyed { header: &header, row }).collect();
        let mut st = s.serialize_struct("ScanResult", 4)?;
        st.serialize_field("spec", spec)?;
        st.serialize_field("rows", &keyed)?;
        st.serialize_field("failures", &r.failures)?;
        if let Some(c) = &r.cross_check {
            st.serialize_field("cross_check", c)?;
        }
        st.end()
    }
}
