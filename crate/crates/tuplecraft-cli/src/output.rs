//! Report delivery: stdout or --out, in text, JSON, or CSV.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub struct Sink {
    pub format: Format,
    out: Option<PathBuf>,
}

impl Sink {
    pub fn new(format: Format, json_flag: bool, out: Option<PathBuf>) -> Sink {
        let format = if json_flag { Format::Json } else { format };
        Sink { format, out }
    }

    /// Ship a finished report body (no trailing newline required).
    pub fn deliver(&self, mut body: String) -> Result<()> {
        if !body.ends_with('\n') {
            body.push('\n');
        }
        match &self.out {
            Some(path) => fs::write(path, body)
                .with_context(|| format!("writing report to {}", path.display()))?,
            None => std::io::stdout()
                .write_all(body.as_bytes())
                .context("writing report to stdout")?,
        }
        Ok(())
    }

    /// Render a serializable report in the selected format, using the
    /// provided closures for the human and tabular views.
    pub fn render<T: Serialize>(
        &self,
        report: &T,
        text: impl FnOnce() -> String,
        csv: impl FnOnce() -> String,
    ) -> Result<()> {
        let body = match self.format {
            Format::Text => text(),
            Format::Json => serde_json::to_string_pretty(report)?,
            Format::Csv => csv(),
        };
        self.deliver(body)
    }
}

/// "header\nrow,row,…" assembly for the CSV views.
pub fn csv_table<R: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: R) -> String {
    let mut out = header.join(",");
    for row in rows {
        let _ = write!(out, "\n{}", row.join(","));
    }
    out
}

/// Two-column key/value CSV for scalar reports.
pub fn csv_pairs(pairs: &[(&str, String)]) -> String {
    csv_table(
        &["field", "value"],
        pairs.iter().map(|(k, v)| vec![k.to_string(), v.clone()]),
    )
}
