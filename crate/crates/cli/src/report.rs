use std::collections::BTreeMap;

use compoundkit::io::format_f64;
use compoundkit::Verdict;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Tabular view used by the CSV and text renderers.
#[derive(Debug, Default)]
pub struct Table {
    /// Leading comment lines (`# ...`) in CSV output.
    pub preamble: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// First header cell and first column are index labels; CSV moves them into
    /// comment lines so the numeric block re-parses as a matrix.
    pub labeled: bool,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub request: Value,
    /// `PASS`, `FAIL`, or `OK` when the command makes no pass/fail claim.
    pub status: &'static str,
    pub verdicts: Vec<Verdict>,
    pub result: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<&'static str, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    outcome: Option<bool>,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &'static str, request: impl Serialize) -> Self {
        Self {
            command,
            request: serde_json::to_value(request).unwrap_or(Value::Null),
            status: "OK",
            verdicts: Vec::new(),
            result: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            notes: Vec::new(),
            outcome: None,
            table: None,
        }
    }

    /// Records a verdict without making it decide the exit status.
    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    /// Records a verdict that decides pass/fail (all deciding verdicts must pass).
    pub fn deciding(&mut self, v: Verdict) {
        let pass = v.pass && self.outcome.unwrap_or(true);
        self.outcome = Some(pass);
        self.status = if pass { "PASS" } else { "FAIL" };
        self.verdicts.push(v);
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.result
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn tolerance(&mut self, name: &'static str, value: f64) {
        self.tolerances.insert(name, value);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn outcome(&self) -> Option<bool> {
        self.outcome
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        match &self.table {
            Some(t) if t.labeled => {
                for line in &t.preamble {
                    out.push_str(&format!("# {line}\n"));
                }
                out.push_str(&format!("# rows: {}\n", t.rows.iter().map(|r| r[0].as_str()).collect::<Vec<_>>().join(" ")));
                out.push_str(&format!("# cols: {}\n", t.header[1..].join(" ")));
                for row in &t.rows {
                    out.push_str(&row[1..].join(","));
                    out.push('\n');
                }
            }
            Some(t) => {
                for line in &t.preamble {
                    out.push_str(&format!("# {line}\n"));
                }
                if !t.header.is_empty() {
                    out.push_str(&t.header.join(","));
                    out.push('\n');
                }
                for row in &t.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
            }
            None => {
                out.push_str("check,pass,margin,tolerance\n");
                for v in &self.verdicts {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        v.check,
                        v.pass,
                        v.margin.map_or(String::new(), format_f64),
                        format_f64(v.tolerance)
                    ));
                }
            }
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, self.status);
        for v in &self.verdicts {
            out.push_str(&format!(
                "  {:<4} {}{}  (tolerance {:e})\n",
                if v.pass { "pass" } else { "fail" },
                v.check,
                v.margin.map_or(String::new(), |m| format!("  margin {m:.6e}")),
                v.tolerance
            ));
            for note in &v.notes {
                out.push_str(&format!("         note: {note}\n"));
            }
        }
        for (k, v) in &self.result {
            if !v.is_array() && !v.is_object() {
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        if let Some(t) = &self.table {
            out.push('\n');
            out.push_str(&aligned(t));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

fn aligned(t: &Table) -> String {
    let cols = t.header.len().max(t.rows.iter().map(Vec::len).max().unwrap_or(0));
    let mut width = vec![0; cols];
    for row in std::iter::once(&t.header).chain(&t.rows) {
        for (i, cell) in row.iter().enumerate() {
            width[i] = width[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for line in &t.preamble {
        out.push_str(line);
        out.push('\n');
    }
    for row in std::iter::once(&t.header).chain(&t.rows) {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:>w$}", w = width[i]))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
