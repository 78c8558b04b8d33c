use std::io::{self, Write};

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

/// A result table plus the family and parameters that produced it.
#[derive(Debug, Clone)]
pub struct Table {
    pub family: String,
    pub params: Vec<(String, f64)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// Shortest round-trip decimal, switching to exponent form outside
/// `[1e-4, 1e15)`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Num(v) => format_number(*v),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Cell::Int(i) => Value::from(*i),
        Cell::Text(s) => Value::from(s.as_str()),
        Cell::Empty => Value::Null,
    }
}

pub fn write_csv<W: Write>(table: &Table, w: W) -> io::Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(&table.columns)?;
    for row in &table.rows {
        out.write_record(row.iter().map(cell_text))?;
    }
    out.flush()
}

pub fn write_json<W: Write>(table: &Table, mut w: W) -> io::Result<()> {
    let mut params = Map::new();
    for (k, v) in &table.params {
        params.insert(k.clone(), cell_json(&Cell::Num(*v)));
    }
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            for (k, c) in table.columns.iter().zip(r) {
                m.insert(k.clone(), cell_json(c));
            }
            Value::Object(m)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("family".into(), Value::from(table.family.as_str()));
    doc.insert("params".into(), Value::Object(params));
    doc.insert("rows".into(), Value::Array(rows));
    serde_json::to_writer_pretty(&mut w, &Value::Object(doc))?;
    writeln!(w)
}
