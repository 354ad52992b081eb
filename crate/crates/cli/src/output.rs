//! Machine-readable output: CSV with a commented metadata header, or a
//! JSON mirror of the same table. Rows are emitted in grid order with a
//! fixed float format so reruns are byte-identical.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::Path;

use icec_core::{IcecError, Result};

use crate::config::OutputFormat;

/// One tabular result: ordered metadata, column names, numeric rows.
pub struct Table {
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        Self {
            metadata: BTreeMap::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(key.to_string(), value.to_string());
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            s.push_str(&format!("# {k}: {v}\n"));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    fn render_json(&self) -> String {
        let doc = serde_json::json!({
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": self.rows.iter()
                .map(|r| r.iter().map(|v| fmt_float(*v)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("static schema serializes");
        s.push('\n');
        s
    }
}

/// Fixed-width scientific notation; `format!` of f64 is deterministic,
/// the explicit precision just keeps files diff-friendly.
fn fmt_float(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.12e}")
    }
}

pub fn write_table(table: &Table, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let text = table.render(format);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| IcecError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| IcecError::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}
