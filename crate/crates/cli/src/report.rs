//! Report model and its three renderings.

use permit_games::rational::{format_decimal, format_exact};
use permit_games::Rational;
use serde_json::{json, Value};

use crate::scenario::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(Rational),
    Flag(bool),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn num(x: &Rational) -> Cell {
        Cell::Num(x.clone())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Section {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Section {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Section { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), ..Default::default() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> &mut Self {
        self.rows.push(cells);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub sections: Vec<Section>,
    /// One-line conclusion, if the command reaches one.
    pub verdict: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), ..Default::default() }
    }

    pub fn push(&mut self, section: Section) {
        self.sections.push(section);
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Table => self.render_table(precision),
            Format::Csv => self.render_csv(precision),
            Format::Json => self.render_json(precision),
        }
    }

    fn render_table(&self, precision: usize) -> String {
        let mut out = String::new();
        for section in &self.sections {
            out.push_str(&format!("== {} ==\n", section.title));
            if !section.columns.is_empty() {
                let cells: Vec<Vec<String>> = section
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|c| table_cell(c, precision)).collect())
                    .collect();
                let mut widths: Vec<usize> = section.columns.iter().map(|c| c.chars().count()).collect();
                for row in &cells {
                    for (k, c) in row.iter().enumerate() {
                        if k < widths.len() {
                            widths[k] = widths[k].max(c.chars().count());
                        }
                    }
                }
                let line = |items: &[String]| {
                    let padded: Vec<String> = items
                        .iter()
                        .enumerate()
                        .map(|(k, s)| format!("{s:<w$}", w = widths.get(k).copied().unwrap_or(0)))
                        .collect();
                    format!("{}\n", padded.join("  ").trim_end())
                };
                out.push_str(&line(&section.columns));
                for row in &cells {
                    out.push_str(&line(row));
                }
            }
            for note in &section.notes {
                out.push_str(&format!("* {note}\n"));
            }
            out.push('\n');
        }
        if let Some(v) = &self.verdict {
            out.push_str(&format!("verdict: {v}\n"));
        }
        out
    }

    fn render_csv(&self, precision: usize) -> String {
        let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        for section in &self.sections {
            writer.write_record([format!("# {}", section.title)]).expect("in-memory write");
            // numeric columns are split into a decimal and an exact column
            let numeric: Vec<bool> = (0..section.columns.len())
                .map(|k| section.rows.iter().any(|r| matches!(r.get(k), Some(Cell::Num(_)))))
                .collect();
            if !section.columns.is_empty() {
                let mut header = Vec::new();
                for (k, col) in section.columns.iter().enumerate() {
                    header.push(col.clone());
                    if numeric[k] {
                        header.push(format!("{col} (exact)"));
                    }
                }
                writer.write_record(&header).expect("in-memory write");
            }
            for row in &section.rows {
                let mut record = Vec::new();
                for (k, cell) in row.iter().enumerate() {
                    match cell {
                        Cell::Num(x) => {
                            record.push(format_decimal(x, precision));
                            record.push(format_exact(x));
                        }
                        other => {
                            record.push(plain_cell(other));
                            if numeric.get(k).copied().unwrap_or(false) {
                                record.push(String::new());
                            }
                        }
                    }
                }
                writer.write_record(&record).expect("in-memory write");
            }
            for note in &section.notes {
                writer.write_record([format!("# {note}")]).expect("in-memory write");
            }
        }
        if let Some(v) = &self.verdict {
            writer.write_record([format!("# verdict: {v}")]).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    }

    fn render_json(&self, precision: usize) -> String {
        let sections: Vec<Value> = self
            .sections
            .iter()
            .map(|s| {
                let rows: Vec<Value> = s
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(|c| json_cell(c, precision)).collect()))
                    .collect();
                json!({ "title": s.title, "columns": s.columns, "rows": rows, "notes": s.notes })
            })
            .collect();
        let doc = json!({
            "command": self.command,
            "precision": precision,
            "sections": sections,
            "verdict": self.verdict,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }
}

/// Decimal followed by the exact value, e.g. `16.67 (50/3)`.
pub fn both(x: &Rational, precision: usize) -> String {
    format!("{} ({})", format_decimal(x, precision), format_exact(x))
}

fn table_cell(cell: &Cell, precision: usize) -> String {
    match cell {
        Cell::Num(x) => both(x, precision),
        other => plain_cell(other),
    }
}

fn plain_cell(cell: &Cell) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        Cell::Num(x) => format_exact(x),
        Cell::Flag(b) => if *b { "yes" } else { "no" }.to_string(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(cell: &Cell, precision: usize) -> Value {
    match cell {
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Num(x) => json!({ "decimal": format_decimal(x, precision), "exact": format_exact(x) }),
        Cell::Flag(b) => Value::Bool(*b),
        Cell::Empty => Value::Null,
    }
}

/// Vector rendered as `(a, b, c)` with decimals and exact values.
pub fn vector(values: &[Rational], precision: usize) -> String {
    let items: Vec<String> = values.iter().map(|x| format_decimal(x, precision)).collect();
    let exact: Vec<String> = values.iter().map(format_exact).collect();
    if items == exact {
        format!("({})", items.join(", "))
    } else {
        format!("({}) = ({})", items.join(", "), exact.join(", "))
    }
}

/// Integers as written, other values as decimals: for prose such as
/// `720 + 920 + 1150 > 2300`.
pub fn compact(x: &Rational, precision: usize) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format_decimal(x, precision)
    }
}
