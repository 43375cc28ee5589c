//! CSV tables with `#`-prefixed header comments and 17-significant-digit
//! floats.

use std::io::Write;

use crate::error::{Error, Result};

/// Formats a float with 17 significant digits; infinity is spelled `inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else if v.is_nan() {
        "nan".into()
    } else {
        // `+ 0.0` maps negative zero to zero
        format!("{:.16e}", v + 0.0)
    }
}

/// Spells an exponent `p` for headers and file names.
pub fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else if p.fract() == 0.0 {
        format!("{}", p as i64)
    } else {
        format!("{p}")
    }
}

#[derive(Clone, Debug, Default)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        CsvTable { comments: Vec::new(), columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    /// Adds every line of a multi-line block as a comment.
    pub fn comment_block(&mut self, block: &str) -> &mut Self {
        for line in block.lines() {
            self.comments.push(line.to_string());
        }
        self
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&v| fmt_f64(v)).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write_to(&self, mut out: impl Write) -> Result<()> {
        let io = |e: std::io::Error| Error::Degenerate(format!("write failed: {e}"));
        for c in &self.comments {
            writeln!(out, "# {c}").map_err(io)?;
        }
        let mut writer = csv::WriterBuilder::new().from_writer(out);
        let csv_err = |e: csv::Error| Error::Degenerate(format!("csv write failed: {e}"));
        writer.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            writer.write_record(row).map_err(csv_err)?;
        }
        writer.flush().map_err(io)?;
        Ok(())
    }

    pub fn to_string_lossy(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("in-memory write");
        String::from_utf8_lossy(&buf).into_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_and_inf() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_p(f64::INFINITY), "inf");
        assert_eq!(fmt_p(4.0), "4");
        assert_eq!("1.0000000000000001e-1".parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn table_layout() {
        let mut t = CsvTable::new(["t", "norm"]);
        t.comment("alpha = 1.5");
        t.push_numbers(&[1.0, 0.5]);
        let s = t.to_string_lossy();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# alpha = 1.5");
        assert_eq!(lines[1], "t,norm");
        assert_eq!(lines[2], "1.0000000000000000e0,5.0000000000000000e-1");
    }
}
