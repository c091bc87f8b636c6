use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable lines.
    Text,
    /// One JSON object per line.
    Json,
}

/// Output buffered until the command finishes, so ordering never depends
/// on thread scheduling.
pub struct Report {
    format: Format,
    lines: Vec<String>,
    records: Vec<Value>,
}

impl Report {
    pub fn new(format: Format) -> Self {
        Report { format, lines: Vec::new(), records: Vec::new() }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn record(&mut self, v: Value) {
        self.records.push(v);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        match self.format {
            Format::Text => {
                for l in &self.lines {
                    out.push_str(l);
                    out.push('\n');
                }
            }
            Format::Json => {
                for r in &self.records {
                    out.push_str(&r.to_string());
                    out.push('\n');
                }
            }
        }
        out
    }

    pub fn emit(&self, out: Option<&Path>) -> std::io::Result<()> {
        let text = self.render();
        match out {
            Some(p) => std::fs::write(p, text),
            None => std::io::stdout().write_all(text.as_bytes()),
        }
    }
}
