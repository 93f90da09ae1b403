//! Minimal CSV writer for the output tables: one `#` comment line, a header
//! row, then rows of 17-significant-digit scientific values.

use std::io::{self, Write};

/// Round-trip exact rendering of an f64 (17 significant digits).
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    comment: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(comment: impl Into<String>, header: &[&str]) -> Self {
        Table {
            comment: comment.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_header(comment: impl Into<String>, header: Vec<String>) -> Self {
        Table {
            comment: comment.into(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn push(&mut self, values: &[f64]) {
        self.push_cells(values.iter().map(|&v| Some(v)).collect());
    }

    /// Missing values are written as empty fields.
    pub fn push_cells(&mut self, cells: Vec<Option<f64>>) {
        assert_eq!(
            cells.len(),
            self.header.len(),
            "row width must match the header"
        );
        self.rows.push(
            cells
                .into_iter()
                .map(|c| c.map(format_value).unwrap_or_default())
                .collect(),
        );
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# {}", self.comment)?;
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        out.flush()
    }

    pub fn to_string_lossy(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("table content is UTF-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_round_trip() {
        for x in [
            0.0,
            1.0,
            -2.5e-300,
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02214076e23,
        ] {
            let s = format_value(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_value(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn layout() {
        let mut t = Table::new("units: none", &["a", "b"]);
        t.push(&[1.0, 0.5]);
        t.push_cells(vec![Some(2.0), None]);
        assert_eq!(
            t.to_string_lossy(),
            "# units: none\na,b\n1.0000000000000000e0,5.0000000000000000e-1\n2.0000000000000000e0,\n"
        );
    }
}
