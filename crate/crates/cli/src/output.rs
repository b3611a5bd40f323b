use std::io::Write;
use std::path::Path;

use gllog::io::{write_csv_matrix, write_matrix_market};
use gllog::{ComplexMatrix, Error, Result};

use crate::Format;

/// Writes to `path`, or to standard output when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|()| out.flush()).map_err(Error::from)
        }
    }
}

pub fn matrix_text(a: &ComplexMatrix, format: Format) -> String {
    match format {
        Format::Mm => write_matrix_market(a),
        Format::Csv => write_csv_matrix(a),
    }
}

/// CSV text built row by row; the header is mandatory.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { text: format!("{}\n", header.join(",")) }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Shortest text that round-trips the value.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}
