use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    JsonLines,
    Csv,
}

/// Rows for the table and CSV formats plus one JSON object per record.
pub struct Report {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Vec<Value>,
}

impl Report {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Report {
            headers,
            rows: Vec::new(),
            json: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>, json: Value) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
        self.json.push(json);
    }

    pub fn emit(&self, format: Format) -> io::Result<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match format {
            Format::Table => {
                let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: Vec<&str>| -> String {
                    let padded: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, &w)| format!("{c:<w$}"))
                        .collect();
                    padded.join("  ").trim_end().to_string()
                };
                writeln!(out, "{}", line(self.headers.clone()))?;
                for row in &self.rows {
                    writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
                }
            }
            Format::JsonLines => {
                for v in &self.json {
                    writeln!(out, "{v}")?;
                }
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.headers)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}
