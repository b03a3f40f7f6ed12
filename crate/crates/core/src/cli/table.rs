//! Output tables: CSV with a trailing `#` metadata block, or one JSON object.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            // Debug gives the shortest string that parses back to the same bits.
            Cell::Num(x) => format!("{x:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => Value::from(*x),
            Cell::Num(x) => Value::String(format!("{x:?}")),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    meta: Vec<(String, String)>,
    spec: Option<String>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: vec![
                ("command".into(), command.into()),
                ("version".into(), env!("CARGO_PKG_VERSION").into()),
            ],
            spec: None,
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.columns.len(), "row width");
        self.rows.push(cells);
    }

    pub fn meta(&mut self, key: &str, value: String) {
        self.meta.push((key.into(), value));
    }

    /// Attaches the effective spec (as JSON text) to the output.
    pub fn spec(&mut self, json: String) {
        self.spec = Some(json);
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        let mut out = String::from_utf8(w.into_inner()?)?;
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        if let Some(spec) = &self.spec {
            let compact: Value = serde_json::from_str(spec)?;
            out.push_str(&format!("# spec: {compact}\n"));
        }
        Ok(out)
    }

    fn json(&self) -> anyhow::Result<String> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
            .collect();
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let mut doc = Map::new();
        doc.insert("columns".into(), Value::from(self.columns.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        doc.insert("metadata".into(), Value::Object(meta));
        if let Some(spec) = &self.spec {
            doc.insert("spec".into(), serde_json::from_str(spec)?);
        }
        Ok(serde_json::to_string_pretty(&Value::Object(doc))? + "\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", &["a", "b"]);
        t.row(vec![Cell::Num(0.1), Cell::Text("x,y".into())]);
        t.row(vec![Cell::Num(f64::INFINITY), Cell::Empty]);
        t.meta("grid", "4x4".into());
        let s = t.render(Format::Csv).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "a,b");
        assert_eq!(lines[1], "0.1,\"x,y\"");
        assert_eq!(lines[2], "inf,");
        assert_eq!(lines[3], "# command: demo");
        assert_eq!(lines.last(), Some(&"# grid: 4x4"));
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new("demo", &["a"]);
        t.row(vec![Cell::Num(1.5)]);
        t.spec("{\"r\": \"0.5\"}".into());
        let v: Value = serde_json::from_str(&t.render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["rows"][0]["a"], 1.5);
        assert_eq!(v["spec"]["r"], "0.5");
        assert_eq!(v["metadata"]["command"], "demo");
    }
}
