//! Report assembly and rendering for the CLI.
//!
//! Every command produces a flat list of named rows. A row value is either a
//! quantity in nats, which `--bits` rescales by 1/ln 2, or an opaque string
//! (probabilities, counts, vectors, flags) that unit conversion leaves
//! untouched. Rendering is deterministic: floating-point values use the
//! shortest round-trip `Display` form, so the same rows always produce the
//! same bytes.

use std::fmt::Write as _;

/// Output layout selected with `--format`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// One `name value` pair per line.
    Text,
    /// A `name,value` table (or a module-specific column layout).
    Csv,
}

enum Cell {
    /// A rate or information quantity in nats; `--bits` divides by ln 2.
    Nats(f64),
    /// Unit-free content rendered verbatim.
    Raw(String),
}

/// Ordered collection of named report rows.
pub struct Report {
    rows: Vec<(String, Cell)>,
}

impl Report {
    pub fn new() -> Self {
        Report { rows: Vec::new() }
    }

    /// Adds a quantity in nats, subject to `--bits` conversion.
    pub fn nats(&mut self, name: &str, value: f64) -> &mut Self {
        self.rows.push((name.to_string(), Cell::Nats(value)));
        self
    }

    /// Adds a unit-free value rendered with `Display`.
    pub fn raw(&mut self, name: &str, value: impl std::fmt::Display) -> &mut Self {
        self.rows
            .push((name.to_string(), Cell::Raw(value.to_string())));
        self
    }

    /// Adds a numeric vector as a `;`-separated list.
    pub fn vector(&mut self, name: &str, values: &[f64]) -> &mut Self {
        let joined = values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(";");
        self.raw(name, joined)
    }

    /// Adds an optional value, writing `-` when absent.
    pub fn opt(&mut self, name: &str, value: Option<f64>) -> &mut Self {
        match value {
            Some(v) => self.raw(name, v),
            None => self.raw(name, "-"),
        }
    }

    /// Renders the rows in the requested format. The first row always names
    /// the unit so a reader of a stored report can tell nats from bits.
    pub fn render(&self, format: Format, bits: bool) -> String {
        let unit = if bits { "bits" } else { "nats" };
        let mut out = String::new();
        if format == Format::Csv {
            out.push_str("name,value\n");
        }
        write_row(&mut out, format, "units", unit);
        for (name, cell) in &self.rows {
            let value = match cell {
                Cell::Nats(v) => {
                    let v = if bits { v / std::f64::consts::LN_2 } else { *v };
                    v.to_string()
                }
                Cell::Raw(s) => s.clone(),
            };
            write_row(&mut out, format, name, &value);
        }
        out
    }
}

fn write_row(out: &mut String, format: Format, name: &str, value: &str) {
    match format {
        Format::Text => writeln!(out, "{name} {value}").unwrap(),
        Format::Csv => writeln!(out, "{name},{value}").unwrap(),
    }
}
