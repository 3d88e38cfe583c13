//! Rendering of every payload in the four output formats.
//!
//! `json` and `csv` are machine-stable; `markdown` and `plain` are for
//! reading. All four are byte-deterministic for a given invocation.

use clap::ValueEnum;
use serde::Serialize;

/// Output format selector, shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Json,
    Csv,
    Markdown,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable payload");
    text.push('\n');
    text
}

/// A generic table: header plus rows, rendered as csv/markdown/plain.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn render_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf8")
    }

    pub fn render_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("| {} |\n", self.header.join(" | ")));
        out.push_str(&format!("|{}\n", " --- |".repeat(self.header.len())));
        for row in &self.rows {
            out.push_str(&format!("| {} |\n", row.join(" | ")));
        }
        out
    }

    pub fn render_plain(&self, heading: &str) -> String {
        let mut out = format!("# {heading}\n");
        for row in &self.rows {
            out.push_str(&row.join("  "));
            out.push('\n');
        }
        out
    }
}
