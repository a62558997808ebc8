//! JSON and CSV rendering.

use clap::ValueEnum;
use opdc_core::Rational;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Floats in CSV and in text cells: 17 significant digits.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rows for CSV output. Exact values stay fraction strings.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_raw(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn push_rationals(&mut self, k: usize, xs: &[&Rational]) {
        let mut row = vec![k.to_string()];
        row.extend(xs.iter().map(|x| x.to_string()));
        self.rows.push(row);
    }

    pub fn push_rationals_pair(&mut self, k: usize, j: usize, x: &Rational, y: &Rational) {
        self.rows.push(vec![k.to_string(), j.to_string(), x.to_string(), y.to_string()]);
    }

    pub fn push_floats(&mut self, xs: &[f64]) {
        self.rows.push(xs.iter().map(|x| float(*x)).collect());
    }

    fn render(&self) -> String {
        let mut out = String::new();
        if !self.header.is_empty() {
            out.push_str(&self.header.join(","));
            out.push('\n');
        }
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

pub struct Report {
    json: Value,
    table: Table,
}

impl Report {
    pub fn new(json: Value, table: Table) -> Self {
        Report { json, table }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.table.render(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_17_significant_digits() {
        assert_eq!(float(0.1), "1.0000000000000001e-1");
        assert_eq!(float(-2.0), "-2.0000000000000000e0");
        assert_eq!(float(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn csv_without_header() {
        let mut t = Table::new(&[]);
        t.push_floats(&[1.0]);
        let r = Report::new(Value::Null, t);
        assert_eq!(r.render(Format::Csv), "1.0000000000000000e0\n");
    }
}
