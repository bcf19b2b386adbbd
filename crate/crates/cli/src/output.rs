use std::io::{self, Write};

use serde::Serialize;

use crate::config::Format;

/// Buffered stdout with CSV rows and one-per-line JSON records.
pub struct Out {
    w: io::BufWriter<io::StdoutLock<'static>>,
    pub format: Format,
}

impl Out {
    pub fn new(format: Format) -> Self {
        Self {
            w: io::BufWriter::new(io::stdout().lock()),
            format,
        }
    }

    pub fn line(&mut self, s: &str) -> io::Result<()> {
        writeln!(self.w, "{s}")
    }

    pub fn raw(&mut self, s: &str) -> io::Result<()> {
        self.w.write_all(s.as_bytes())
    }

    pub fn record<T: Serialize>(&mut self, r: &T) -> io::Result<()> {
        serde_json::to_writer(&mut self.w, r)?;
        self.w.write_all(b"\n")
    }

    pub fn csv_row(&mut self, fields: &[String]) -> io::Result<()> {
        writeln!(self.w, "{}", fields.join(","))
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.w.flush()
    }
}

/// Shortest round-trip form with `.` as decimal separator; scientific
/// notation outside `[1e-4, 1e15)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// A JSON record on stderr, for diagnostics that accompany CSV output.
pub fn diagnostics<T: Serialize>(r: &T) {
    if let Ok(s) = serde_json::to_string(r) {
        eprintln!("{s}");
    }
}
