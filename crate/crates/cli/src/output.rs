//! Stamped CSV and JSON writers. Floats use Rust's shortest round-trip form,
//! lines end in LF, and every document carries the seed and config hash.

use anyhow::Result;
use serde::Serialize;

/// Identifies the run that produced an output.
#[derive(Debug, Clone, Serialize)]
pub struct Stamp {
    pub seed: u64,
    pub config_hash: String,
}

/// CSV with a `# seed=… config_hash=…` comment line above the header.
pub struct Table {
    header: Vec<&'static str>,
    notes: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), notes: Vec::new(), rows: Vec::new() }
    }

    /// Extra `key=value` pairs for the comment line.
    pub fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.notes.push(format!("{key}={value}"));
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, stamp: &Stamp) -> Result<String> {
        let mut out = format!("# seed={} config_hash={}", stamp.seed, stamp.config_hash);
        for note in &self.notes {
            out.push(' ');
            out.push_str(note);
        }
        out.push('\n');
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        out.push_str(&String::from_utf8(writer.into_inner()?)?);
        Ok(out)
    }
}

/// A JSON object with the stamp fields first.
pub fn json<T: Serialize>(stamp: &Stamp, body: &T) -> Result<String> {
    #[derive(Serialize)]
    struct Stamped<'a, T> {
        #[serde(flatten)]
        stamp: &'a Stamp,
        #[serde(flatten)]
        body: &'a T,
    }
    let mut text = serde_json::to_string_pretty(&Stamped { stamp, body })?;
    text.push('\n');
    Ok(text)
}

pub fn num(x: f64) -> String {
    format!("{x}")
}
