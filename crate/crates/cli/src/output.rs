//! Tabular results and their CSV / JSON rendering.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::spec::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            // non-finite floats have no JSON literal
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) => Value::Null,
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

/// Shortest round-trip form, so rows are stable text.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:?}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Sidecar suffix such as `roots`; empty for the main table.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
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
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Spec echo followed by command-specific summary entries.
    pub meta: Vec<(String, String)>,
    pub table: Table,
    pub sidecars: Vec<Table>,
}

impl RunResult {
    /// `false` if any row carries `pass = false`.
    pub fn all_pass(&self) -> bool {
        match self.table.column("pass") {
            Some(i) => self.table.rows.iter().all(|r| r[i] != Cell::Bool(false)),
            None => true,
        }
    }

    pub fn render(&self, table: &Table, format: Format) -> String {
        match format {
            Format::Csv => render_csv(&self.meta, table),
            Format::Json => render_json(&self.meta, table),
        }
    }

    /// Main document followed by sidecars, separated by blank lines.
    pub fn render_all(&self, format: Format) -> String {
        let mut out = self.render(&self.table, format);
        for s in &self.sidecars {
            out.push('\n');
            out.push_str(&self.render(s, format));
        }
        out
    }

    /// Writes the main table to `path` and each sidecar next to it.
    pub fn write_files(&self, path: &Path, format: Format) -> std::io::Result<Vec<PathBuf>> {
        let mut written = vec![path.to_path_buf()];
        std::fs::write(path, self.render(&self.table, format))?;
        for s in &self.sidecars {
            let p = sidecar_path(path, &s.name);
            std::fs::write(&p, self.render(s, format))?;
            written.push(p);
        }
        Ok(written)
    }
}

/// `dir/run.csv` with sidecar `roots` becomes `dir/run.roots.csv`.
pub fn sidecar_path(path: &Path, name: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let file = match path.extension() {
        Some(ext) => format!("{stem}.{name}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{name}"),
    };
    path.with_file_name(file)
}

fn render_csv(meta: &[(String, String)], table: &Table) -> String {
    let mut out = String::new();
    for (k, v) in meta {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    if !table.name.is_empty() {
        out.push_str(&format!("# table: {}\n", table.name));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::to_csv)).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
    out
}

fn render_json(meta: &[(String, String)], table: &Table) -> String {
    let mut m = Map::new();
    for (k, v) in meta {
        m.insert(k.clone(), json!(v));
    }
    if !table.name.is_empty() {
        m.insert("table".into(), json!(table.name));
    }
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .cloned()
                .zip(r.iter().map(Cell::to_json))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let doc = json!({ "meta": Value::Object(m), "rows": rows });
    let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunResult {
        let mut t = Table::new("", &["check_id", "value_a", "pass"]);
        t.push(vec![Cell::Text("a".into()), Cell::Float(0.1), Cell::Bool(true)]);
        t.push(vec![Cell::Text("b".into()), Cell::Float(f64::NAN), Cell::Bool(false)]);
        RunResult {
            meta: vec![("seed".into(), "7".into())],
            table: t,
            sidecars: vec![],
        }
    }

    #[test]
    fn csv_has_metadata_then_rows() {
        let r = sample();
        let s = r.render_all(Format::Csv);
        assert_eq!(s, "# seed: 7\ncheck_id,value_a,pass\na,0.1,true\nb,nan,false\n");
        assert!(!r.all_pass());
    }

    #[test]
    fn json_mirrors_rows() {
        let s = sample().render_all(Format::Json);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["meta"]["seed"], "7");
        assert_eq!(v["rows"][0]["check_id"], "a");
        assert_eq!(v["rows"][1]["value_a"], Value::Null);
        assert_eq!(v["rows"][1]["pass"], false);
    }

    #[test]
    fn sidecar_naming() {
        assert_eq!(sidecar_path(Path::new("out/run.csv"), "roots"), PathBuf::from("out/run.roots.csv"));
        assert_eq!(sidecar_path(Path::new("run"), "summary"), PathBuf::from("run.summary"));
    }

    #[test]
    fn float_text_round_trips() {
        for v in [0.1, 1e-300, -2.5, 123456789.125] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }
}
