//! Reports and their text, CSV and record renderings.

use std::fmt::Write as _;

use num_rational::Ratio;
use serde_json::{json, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    /// Aligned columns.
    #[default]
    Text,
    Csv,
    /// One JSON document.
    Records,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Table {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Columns padded to equal width, separated by ` | `, with a rule under
    /// the header. Trailing padding is trimmed.
    pub fn to_text(&self) -> String {
        let width = |s: &str| s.chars().count();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| width(c)).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(width(cell));
            }
        }
        let line = |cells: &[String]| {
            let mut out = String::new();
            for (k, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if k > 0 {
                    out.push_str(" | ");
                }
                out.push_str(cell);
                out.extend(std::iter::repeat_n(' ', w - width(cell)));
            }
            out.truncate(out.trim_end().len());
            out.push('\n');
            out
        };
        let mut out = line(&self.columns);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&rule.join("-+-"));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in std::iter::once(&self.columns).chain(&self.rows) {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> Json {
        json!({ "name": self.name, "columns": self.columns, "rows": self.rows })
    }
}

fn csv_cell(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// The output of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    /// The command as written in canonical form.
    pub command: String,
    pub line: usize,
    pub tables: Vec<Table>,
    /// Replaces the tables in text output when present.
    pub diagram: Option<String>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = format!("# {}\n", self.command);
                match &self.diagram {
                    Some(d) => out.push_str(d),
                    None => {
                        for (k, t) in self.tables.iter().enumerate() {
                            if k > 0 {
                                out.push('\n');
                            }
                            out.push_str(&t.to_text());
                        }
                    }
                }
                out
            }
            Format::Csv => {
                let mut out = String::new();
                for t in &self.tables {
                    let _ = writeln!(out, "# {} [{}]", self.command, t.name);
                    out.push_str(&t.to_csv());
                }
                out
            }
            Format::Records => {
                let mut out = serde_json::to_string_pretty(&self.to_json()).expect("plain json");
                out.push('\n');
                out
            }
        }
    }

    pub fn to_json(&self) -> Json {
        json!({
            "command": self.command,
            "line": self.line,
            "tables": self.tables.iter().map(Table::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Renders all reports as one document.
pub fn render_reports(reports: &[Report], format: Format, seed: Option<u64>) -> String {
    match format {
        Format::Records => {
            let doc = json!({
                "seed": seed,
                "reports": reports.iter().map(Report::to_json).collect::<Vec<_>>(),
            });
            let mut out = serde_json::to_string_pretty(&doc).expect("plain json");
            out.push('\n');
            out
        }
        _ => {
            let parts: Vec<String> = reports.iter().map(|r| r.render(format)).collect();
            parts.join("\n")
        }
    }
}

/// `p` rounded half-up to 6 decimals.
pub fn decimal(p: Ratio<u64>) -> String {
    let scaled = (*p.numer() as u128 * 2_000_000 + *p.denom() as u128) / (2 * *p.denom() as u128);
    format!("{}.{:06}", scaled / 1_000_000, scaled % 1_000_000)
}

/// Signed variant of [`decimal`].
pub fn decimal_signed(r: Ratio<i64>) -> String {
    let magnitude = Ratio::new(r.numer().unsigned_abs(), r.denom().unsigned_abs());
    let text = decimal(magnitude);
    if *r.numer() < 0 && text.bytes().any(|b| (b'1'..=b'9').contains(&b)) {
        format!("-{text}")
    } else {
        text
    }
}

pub fn fraction(p: Ratio<u64>) -> String {
    if p.is_integer() {
        p.numer().to_string()
    } else {
        format!("{}/{}", p.numer(), p.denom())
    }
}
