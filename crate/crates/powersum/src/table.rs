//! CSV tables with locale-independent number formatting.

use std::io;

/// Significant digits used for every number written to CSV.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// `x` with [`SIGNIFICANT_DIGITS`] significant digits, trailing zeros
/// trimmed, in plain notation for exponents in `-5..9` and scientific
/// notation otherwise.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = SIGNIFICANT_DIGITS - 1;
    // Round first so that e.g. 9.999999999 picks up its carried exponent.
    let sci = format!("{:.*e}", digits, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (digits as i32 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_owned()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| (*h).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Column `name` of every row.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_number(1.4577379737113252), "1.45773797");
        assert_eq!(format_number(2f64.sqrt()), "1.41421356");
        assert_eq!(format_number(1.25), "1.25");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-0.5), "-0.5");
        assert_eq!(format_number(123456789.4), "123456789");
        assert_eq!(format_number(1234567890.0), "1.23456789e9");
        assert_eq!(format_number(9.9999999999), "10");
        assert_eq!(format_number(1e-7), "1e-7");
        assert_eq!(format_number(0.000123456789123), "0.000123456789");
        assert_eq!(format_number(0.0), "0");
    }

    #[test]
    fn parses_back_within_precision() {
        for x in [std::f64::consts::PI, 1e-9 / 3.0, 7.0e12 / 3.0, -2.0 / 3.0] {
            let y: f64 = format_number(x).parse().unwrap();
            assert!((x - y).abs() <= 5e-9 * x.abs(), "{x} -> {y}");
        }
    }

    #[test]
    fn quotes_fields_with_commas() {
        let mut t = Table::new(&["formula", "notes"]);
        t.push(vec!["C1ii".into(), "m > n^2; n >= 2, unmet".into()]);
        assert_eq!(
            t.to_csv(),
            "formula,notes\nC1ii,\"m > n^2; n >= 2, unmet\"\n"
        );
        assert_eq!(t.column("formula"), Some(vec!["C1ii"]));
    }
}
