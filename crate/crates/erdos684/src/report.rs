//! Deterministic output formatting: 12-significant-digit decimals, CSV
//! with RFC-4180-style quoting, and stable-key-order JSON through serde
//! struct fields.

use std::io::Write;

/// A float rendered with 12 significant digits. Values far outside the
/// decimal comfort zone fall back to scientific notation with the same
/// significance.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-7..=15).contains(&mag) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Quote a CSV field per RFC 4180: wrap in quotes when it contains a
/// comma, quote, or line break; double interior quotes.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub struct CsvWriter<W: Write> {
    out: W,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, header: &[&str]) -> std::io::Result<Self> {
        let line: Vec<String> = header.iter().map(|h| csv_field(h)).collect();
        writeln!(out, "{}", line.join(","))?;
        Ok(CsvWriter { out })
    }

    pub fn row(&mut self, fields: &[String]) -> std::io::Result<()> {
        let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        writeln!(self.out, "{}", line.join(","))
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_shapes() {
        assert_eq!(fmt_sig12(0.0), "0.00000000000");
        assert_eq!(fmt_sig12(1.0), "1.00000000000");
        assert_eq!(fmt_sig12(2520.0f64.ln()), "7.83201418051");
        assert_eq!(fmt_sig12(0.000123456789012345), "0.000123456789012");
        assert_eq!(fmt_sig12(-3.5), "-3.50000000000");
        assert!(fmt_sig12(1e20).contains('e'));
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        let mut w = CsvWriter::new(Vec::new(), &["x", "y,z"]).unwrap();
        w.row(&["1".into(), "two,three".into()]).unwrap();
        let bytes = w.into_inner();
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "x,\"y,z\"\n1,\"two,three\"\n"
        );
    }
}
