//! Plain CSV with a `#`-prefixed metadata preamble.
//!
//! Every artifact the CLI writes goes through [`CsvDocument`] so numeric
//! formatting is fixed (12 significant digits) and output is byte-identical
//! across runs.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Formats a float with 12 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        // also folds -0.0
        return "0".to_string();
    }
    format!("{x:.11e}")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvDocument {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvDocument {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            metadata: Vec::new(),
            header: header.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        let value = value.to_string().replace('\n', " ");
        self.metadata.push((key.into(), value));
        self
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parses a numeric column.
    pub fn column_f64(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self
            .column(name)
            .ok_or_else(|| Error::Config(format!("missing column {name}")))?;
        self.rows
            .iter()
            .map(|r| {
                r[idx]
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("column {name}: {e}")))
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = CsvDocument::default();
        let mut have_header = false;
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim_start();
                let (k, v) = rest.split_once(':').unwrap_or((rest, ""));
                doc.metadata
                    .push((k.trim().to_string(), v.trim().to_string()));
                continue;
            }
            let fields: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
            if !have_header {
                doc.header = fields;
                have_header = true;
            } else {
                if fields.len() != doc.header.len() {
                    return Err(Error::Config(format!(
                        "line {}: expected {} fields, found {}",
                        lineno + 1,
                        doc.header.len(),
                        fields.len()
                    )));
                }
                doc.rows.push(fields);
            }
        }
        if !have_header {
            return Err(Error::Config("no header row".into()));
        }
        Ok(doc)
    }
}
