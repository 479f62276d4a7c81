//! Number formatting and tabular emission.
//!
//! Every number leaving the tool goes through [`format_significant`] with
//! 12 significant digits, so JSON and CSV emissions of the same result
//! carry byte-identical values and diffs are stable across platforms.

use serde::{Deserialize, Serialize};

/// Significant digits used for all emitted numbers.
pub const EMIT_DIGITS: usize = 12;

/// Render `value` with `digits` significant digits as a plain decimal
/// string, falling back to scientific notation for extreme magnitudes.
pub fn format_significant(value: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let formatted = format!("{:.*e}", digits - 1, value.abs());
    let (mantissa, exponent) = formatted
        .split_once('e')
        .expect("scientific form always has an exponent");
    let exponent: i32 = exponent.parse().expect("valid exponent");
    let digits_str: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if value < 0.0 { "-" } else { "" };

    // Keep plain decimals for the ranges results actually live in.
    if !(-9..=18).contains(&exponent) {
        let trimmed = trim_zeros(&format!(
            "{}.{}",
            &digits_str[..1],
            &digits_str[1..]
        ));
        return format!("{sign}{trimmed}e{exponent}");
    }

    let point = exponent + 1; // digits before the decimal point
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat(-point as usize), digits_str)
    } else if (point as usize) >= digits_str.len() {
        format!("{}{}", digits_str, "0".repeat(point as usize - digits_str.len()))
    } else {
        format!("{}.{}", &digits_str[..point as usize], &digits_str[point as usize..])
    };
    format!("{sign}{}", trim_zeros(&body))
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Shorthand at the emission precision.
pub fn emit(value: f64) -> String {
    format_significant(value, EMIT_DIGITS)
}

/// A simple named-column table; the unit of CSV and JSON emission.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.headers.len(), "ragged table row");
        self.rows.push(row);
    }

    /// UTF-8, comma-separated, LF line endings, header row first.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_reference_values() {
        assert_eq!(format_significant(0.25, 12), "0.25");
        assert_eq!(format_significant(-3.5, 12), "-3.5");
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(123.456, 12), "123.456");
        assert_eq!(format_significant(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_significant(52.571428571428573, 12), "52.5714285714");
        assert_eq!(format_significant(1e-20, 12), "1e-20");
        assert_eq!(format_significant(1234.0, 4), "1234");
    }

    #[test]
    fn formatting_is_stable_under_reparse() {
        for x in [0.1, 2.0 / 7.0, 1e-8, 44.5, -17.25] {
            let s = emit(x);
            let back: f64 = s.parse().unwrap();
            // Round-tripping the 12-digit form reproduces the same string.
            assert_eq!(emit(back), s);
            assert!((back - x).abs() <= x.abs() * 1e-11);
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "2".into()]);
        t.push(vec!["3".into(), "4".into()]);
        assert_eq!(t.to_csv(), "a,b\n1,2\n3,4\n");
    }
}
