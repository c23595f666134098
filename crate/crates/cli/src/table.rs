//! Row buffers and their CSV / JSON-lines rendering.

use std::fmt::Write as _;

use foxh::scalar::Real;
use num_complex::Complex;

use crate::job::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// A formatted number, emitted bare in both formats.
    Num(String),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn real<T: Real>(x: &T, sig: usize) -> Cell {
        if x.is_finite() {
            Cell::Num(x.to_sci(sig))
        } else {
            Cell::Text(x.to_sci(sig))
        }
    }

    /// `-inf` for an absent abscissa.
    pub fn real_or_neg_inf<T: Real>(x: &Option<T>, sig: usize) -> Cell {
        match x {
            Some(x) => Cell::real(x, sig),
            None => Cell::Text("-inf".into()),
        }
    }

    pub fn complex<T: Real>(z: &Complex<T>, sig: usize) -> [Cell; 2] {
        [Cell::real(&z.re, sig), Cell::real(&z.im, sig)]
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(s) | Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings serialize"),
            Cell::Empty => "null".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                out.push_str(&self.header.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            Format::Jsonl => {
                for row in &self.rows {
                    out.push('{');
                    for (i, (key, cell)) in self.header.iter().zip(row).enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        write!(out, "\"{key}\":{}", cell.json()).expect("writing to a string");
                    }
                    out.push_str("}\n");
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_both_formats() {
        let mut t = Table::new(&["index", "re", "status"]);
        t.push(vec![Cell::Int(0), Cell::Num("1.50e0".into()), Cell::Text("ok".into())]);
        t.push(vec![Cell::Int(1), Cell::Empty, Cell::Text("OutsideDisk".into())]);
        assert_eq!(t.render(Format::Csv), "index,re,status\n0,1.50e0,ok\n1,,OutsideDisk\n");
        assert_eq!(
            t.render(Format::Jsonl),
            "{\"index\":0,\"re\":1.50e0,\"status\":\"ok\"}\n{\"index\":1,\"re\":null,\"status\":\"OutsideDisk\"}\n"
        );
    }

    #[test]
    fn non_finite_values_are_text() {
        assert_eq!(Cell::real(&f64::NEG_INFINITY, 5), Cell::Text("-inf".into()));
        assert_eq!(Cell::real_or_neg_inf::<f64>(&None, 5), Cell::Text("-inf".into()));
    }
}
