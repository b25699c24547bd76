use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::args::Format;
use crate::error::CliError;

/// A command result in both renderings, plus the exit code it implies.
pub struct Output {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub code: i32,
}

impl Output {
    pub fn new(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Self { json, header: header.iter().map(|s| s.to_string()).collect(), rows, code: 0 }
    }

    pub fn with_code(mut self, code: i32) -> Self {
        self.code = code;
        self
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                // serde_json maps are ordered by key
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| CliError::io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).map_err(|e| CliError::io(e.to_string()))?;
                for r in &self.rows {
                    w.write_record(r).map_err(|e| CliError::io(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::io(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::io(e.to_string()))
            }
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::io(e.to_string()))
        }
    }
}
