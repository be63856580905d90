//! Result tables and their CSV form.
//!
//! The file starts with `#` metadata lines (version, timestamp, the resolved
//! configuration as `# config: key = value`), followed by an RFC 4180 header
//! and data rows. Numbers carry 15 significant digits.

use std::io::{self, Write};

/// Prefix of the configuration echo lines.
pub const CONFIG_PREFIX: &str = "# config: ";
/// Prefix of the single line that changes from run to run.
pub const TIMESTAMP_PREFIX: &str = "# generated: ";

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub values: Vec<f64>,
    /// Failure message of this point; its values are then NaN.
    pub error: Option<String>,
}

impl Row {
    pub fn ok(values: Vec<f64>) -> Self {
        Self {
            values,
            error: None,
        }
    }

    pub fn failed(n_values: usize, keep: &[f64], error: String) -> Self {
        let mut values = vec![f64::NAN; n_values];
        values[..keep.len()].copy_from_slice(keep);
        Self {
            values,
            error: Some(error),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    /// Numeric column names with units; the CSV adds a final `error` column.
    pub header: Vec<String>,
    pub rows: Vec<Row>,
    /// Lines written after the `#` prefix, before the header.
    pub metadata: Vec<String>,
}

impl ResultTable {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    fn check(&self) -> io::Result<()> {
        for (i, r) in self.rows.iter().enumerate() {
            if r.values.len() != self.header.len() {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!(
                        "row {i} has {} values for {} columns",
                        r.values.len(),
                        self.header.len()
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        self.check()?;
        let mut out = io::BufWriter::new(out);
        for line in &self.metadata {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::WriterBuilder::new().from_writer(out);
        w.write_record(self.header.iter().map(String::as_str).chain(["error"]))?;
        for r in &self.rows {
            let mut fields: Vec<String> = r.values.iter().map(|&x| format_number(x)).collect();
            fields.push(r.error.clone().unwrap_or_default());
            w.write_record(&fields)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> io::Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    }
}

/// Shortest decimal that carries the value rounded to 15 significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    let a = rounded.abs();
    if rounded == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Header and values of a CSV written by [`ResultTable::write_csv`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    pub metadata: Vec<String>,
    pub header: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub errors: Vec<String>,
}

pub fn read_csv(text: &str) -> Result<ParsedCsv, csv::Error> {
    let metadata = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim_start().to_string())
        .collect();
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    header.pop();
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let n = rec.len();
        values.push(
            rec.iter()
                .take(n - 1)
                .map(|f| f.parse().unwrap_or(f64::NAN))
                .collect(),
        );
        errors.push(rec[n - 1].to_string());
    }
    Ok(ParsedCsv {
        metadata,
        header,
        values,
        errors,
    })
}

/// The `key = value` configuration echoed into a CSV file.
pub fn extract_config(csv_text: &str) -> String {
    let mut out = String::new();
    for line in csv_text.lines() {
        if let Some(kv) = line.strip_prefix(CONFIG_PREFIX) {
            out.push_str(kv);
            out.push('\n');
        }
    }
    out
}
