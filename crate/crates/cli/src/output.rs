//! Serialization of report rows and standalone values to stdout in the three
//! supported formats.

use std::io::{self, Write};

use clap::ValueEnum;
use kforge_core::report::VerificationReport;
use kforge_core::{C, F};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON object per line.
    Json,
    /// RFC-4180 CSV with a header row.
    Csv,
    /// Fixed-width human-readable columns.
    Table,
}

/// Streams verification reports in one format, emitting the CSV header or
/// table header exactly once.
pub struct ReportWriter {
    format: Format,
    wrote_header: bool,
}

pub fn report_writer(format: Format) -> ReportWriter {
    ReportWriter {
        format,
        wrote_header: false,
    }
}

impl ReportWriter {
    pub fn rows(&mut self, rows: &[VerificationReport]) -> io::Result<()> {
        match self.format {
            Format::Json => {
                let stdout = io::stdout();
                let mut out = stdout.lock();
                for r in rows {
                    serde_json::to_writer(&mut out, r)?;
                    out.write_all(b"\n")?;
                }
                Ok(())
            }
            Format::Csv => self.csv_rows(rows),
            Format::Table => self.table_rows(rows),
        }
    }

    fn csv_rows(&mut self, rows: &[VerificationReport]) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(io::stdout());
        if !self.wrote_header {
            w.write_record([
                "suite", "paper_ref", "inputs", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
                "abs_diff", "tol", "pass", "ms",
            ])
            .map_err(csv_to_io)?;
            self.wrote_header = true;
        }
        for r in rows {
            w.write_record([
                r.suite.as_str(),
                r.reference.as_str(),
                &r.inputs.to_string(),
                &fmt_float(r.lhs[0]),
                &fmt_float(r.lhs[1]),
                &fmt_float(r.rhs[0]),
                &fmt_float(r.rhs[1]),
                &fmt_float(r.abs_diff),
                &fmt_float(r.tol),
                if r.pass { "true" } else { "false" },
                &fmt_float(r.ms),
            ])
            .map_err(csv_to_io)?;
        }
        w.flush()
    }

    fn table_rows(&mut self, rows: &[VerificationReport]) -> io::Result<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        if !self.wrote_header {
            writeln!(
                out,
                "{:<12} {:<44} {:>12} {:>12} {:>5} {:>9}",
                "suite", "identity", "abs_diff", "tol", "pass", "ms"
            )?;
            self.wrote_header = true;
        }
        for r in rows {
            writeln!(
                out,
                "{:<12} {:<44} {:>12.3e} {:>12.3e} {:>5} {:>9.2}",
                r.suite,
                r.reference,
                r.abs_diff,
                r.tol,
                if r.pass { "ok" } else { "FAIL" },
                r.ms
            )?;
        }
        Ok(())
    }
}

/// One named complex value plus free-form context, for the eval commands.
pub struct ValueRow {
    name: &'static str,
    value: C,
    extra: serde_json::Map<String, serde_json::Value>,
}

impl ValueRow {
    pub fn new(name: &'static str, value: C) -> Self {
        ValueRow {
            name,
            value,
            extra: serde_json::Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: serde_json::Value) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    pub fn emit(self, format: Format) -> io::Result<()> {
        emit_values(format, std::slice::from_ref(&self))
    }
}

pub fn emit_values(format: Format, rows: &[ValueRow]) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            for r in rows {
                let mut obj = json!({ "name": r.name, "value": [r.value.re, r.value.im] });
                for (k, v) in &r.extra {
                    obj[k] = v.clone();
                }
                serde_json::to_writer(&mut out, &obj)?;
                out.write_all(b"\n")?;
            }
            Ok(())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["name", "value_re", "value_im", "context"])
                .map_err(csv_to_io)?;
            for r in rows {
                w.write_record([
                    r.name,
                    &fmt_float(r.value.re),
                    &fmt_float(r.value.im),
                    &serde_json::Value::Object(r.extra.clone()).to_string(),
                ])
                .map_err(csv_to_io)?;
            }
            w.flush()
        }
        Format::Table => {
            for r in rows {
                writeln!(
                    out,
                    "{:<32} {:>24.15e} {:>+24.15e}i  {}",
                    r.name,
                    r.value.re,
                    r.value.im,
                    serde_json::Value::Object(r.extra.clone())
                )?;
            }
            Ok(())
        }
    }
}

fn csv_to_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(ioe) => ioe,
        other => io::Error::new(io::ErrorKind::InvalidData, format!("{other:?}")),
    }
}

fn fmt_float(v: F) -> String {
    // Round-trippable but compact; integral floats print without noise.
    let mut s = format!("{v}");
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        return s;
    }
    s.push_str(".0");
    s
}
