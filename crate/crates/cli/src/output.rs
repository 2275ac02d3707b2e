use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use reebvol_core::arith::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Rat(Rational),
    Int(u128),
    Text(String),
    Empty,
}

impl Cell {
    fn exact(&self) -> String {
        match self {
            Cell::Rat(r) => r.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(t) => t.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Rat(r) => Value::String(r.to_string()),
            Cell::Int(i) => u64::try_from(*i).map_or_else(|_| Value::String(i.to_string()), Value::from),
            Cell::Text(t) => Value::String(t.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<Rational> for Cell {
    fn from(r: Rational) -> Cell {
        Cell::Rat(r)
    }
}

impl From<Option<Rational>> for Cell {
    fn from(r: Option<Rational>) -> Cell {
        r.map_or(Cell::Empty, Cell::Rat)
    }
}

/// Named scalars followed by an optional table.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub values: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Document {
    pub fn value(mut self, name: &str, cell: impl Into<Cell>) -> Document {
        self.values.push((name.to_string(), cell.into()));
        self
    }

    pub fn table(mut self, columns: &[&str], rows: Vec<Vec<Cell>>) -> Document {
        self.columns = columns.iter().map(|c| c.to_string()).collect();
        self.rows = rows;
        self
    }

    /// Column layout with a `<name>_decimal` companion after every column
    /// holding rationals.
    fn expanded(&self, decimal: Option<usize>) -> (Vec<String>, Vec<Vec<String>>) {
        let rational_col: Vec<bool> = (0..self.columns.len())
            .map(|j| decimal.is_some() && self.rows.iter().any(|r| matches!(r[j], Cell::Rat(_))))
            .collect();
        let mut header = Vec::new();
        for (j, c) in self.columns.iter().enumerate() {
            header.push(c.clone());
            if rational_col[j] {
                header.push(format!("{c}_decimal"));
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = Vec::new();
                for (j, cell) in r.iter().enumerate() {
                    out.push(cell.exact());
                    if rational_col[j] {
                        out.push(decimal_of(cell, decimal));
                    }
                }
                out
            })
            .collect();
        (header, rows)
    }

    pub fn render(&self, format: Format, decimal: Option<usize>) -> String {
        match format {
            Format::Table => self.render_table(decimal),
            Format::Csv => self.render_csv(decimal),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json(decimal)).expect("serializable");
                s.push('\n');
                s
            }
        }
    }

    fn render_table(&self, decimal: Option<usize>) -> String {
        let mut out = String::new();
        let width = self.values.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.values {
            let exact = v.exact();
            let _ = match (decimal, v) {
                (Some(_), Cell::Rat(_)) => {
                    writeln!(out, "{k:<width$}  {exact}  ({})", decimal_of(v, decimal))
                }
                _ => writeln!(out, "{k:<width$}  {exact}"),
            };
        }
        if !self.columns.is_empty() {
            if !self.values.is_empty() {
                out.push('\n');
            }
            let (header, rows) = self.expanded(decimal);
            out.push_str(&aligned(&header, &rows));
        }
        out
    }

    /// The table when there is one, otherwise `quantity,value` rows.
    fn render_csv(&self, decimal: Option<usize>) -> String {
        let (header, rows) = if self.columns.is_empty() {
            let mut header = vec!["quantity".to_string(), "value".to_string()];
            if decimal.is_some() {
                header.push("decimal".into());
            }
            let rows = self
                .values
                .iter()
                .map(|(k, v)| {
                    let mut row = vec![k.clone(), v.exact()];
                    if decimal.is_some() {
                        row.push(decimal_of(v, decimal));
                    }
                    row
                })
                .collect();
            (header, rows)
        } else {
            self.expanded(decimal)
        };
        csv_text(&header, &rows)
    }

    fn to_json(&self, decimal: Option<usize>) -> Value {
        let mut root = Map::new();
        for (k, v) in &self.values {
            root.insert(k.clone(), v.json());
        }
        if let Some(d) = decimal {
            let dec: Map<String, Value> = self
                .values
                .iter()
                .filter_map(|(k, v)| match v {
                    Cell::Rat(r) => Some((k.clone(), Value::String(r.to_decimal(d)))),
                    _ => None,
                })
                .collect();
            root.insert("decimal".into(), Value::Object(dec));
        }
        if !self.columns.is_empty() {
            let rows: Vec<Value> = self
                .rows
                .iter()
                .map(|r| {
                    let mut obj = Map::new();
                    for (c, cell) in self.columns.iter().zip(r) {
                        obj.insert(c.clone(), cell.json());
                        if let (Some(d), Cell::Rat(x)) = (decimal, cell) {
                            obj.insert(format!("{c}_decimal"), json!(x.to_decimal(d)));
                        }
                    }
                    Value::Object(obj)
                })
                .collect();
            root.insert("rows".into(), Value::Array(rows));
        }
        Value::Object(root)
    }
}

fn decimal_of(cell: &Cell, decimal: Option<usize>) -> String {
    match (cell, decimal) {
        (Cell::Rat(r), Some(d)) => r.to_decimal(d),
        _ => String::new(),
    }
}

pub fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (j, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if j + 1 == cells.len() {
                s.push_str(c);
            } else {
                let _ = write!(s, "{c:<w$}  ");
            }
        }
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(header);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

pub fn csv_text(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc() -> Document {
        Document::default().table(
            &["value", "multiplicity"],
            vec![
                vec![Cell::Rat(Rational::zero()), Cell::Int(3)],
                vec![Cell::Rat(Rational::new(1, 3)), Cell::Int(2)],
            ],
        )
    }

    #[test]
    fn csv_plain_and_decimal() {
        assert_eq!(doc().render(Format::Csv, None), "value,multiplicity\n0,3\n1/3,2\n");
        assert_eq!(
            doc().render(Format::Csv, Some(3)),
            "value,value_decimal,multiplicity\n0,0.000,3\n1/3,0.333,2\n"
        );
    }

    #[test]
    fn csv_quotes_when_needed() {
        let d = Document::default().value("note", Cell::Text("a, \"b\"".into()));
        assert_eq!(d.render(Format::Csv, None), "quantity,value\nnote,\"a, \"\"b\"\"\"\n");
    }

    #[test]
    fn table_alignment() {
        let d = Document::default().value("vol_xi", Rational::new(1, 2)).value("s", Rational::new(1, 3));
        assert_eq!(d.render(Format::Table, None), "vol_xi  1/2\ns       1/3\n");
        assert_eq!(d.render(Format::Table, Some(2)), "vol_xi  1/2  (0.50)\ns       1/3  (0.33)\n");
        assert_eq!(doc().render(Format::Table, None), "value  multiplicity\n0      3\n1/3    2\n");
    }

    #[test]
    fn json_keeps_exact_strings() {
        let d = Document::default().value("vol_xi", Rational::new(1, 2));
        assert_eq!(d.render(Format::Json, Some(2)), "{\n  \"vol_xi\": \"1/2\",\n  \"decimal\": {\n    \"vol_xi\": \"0.50\"\n  }\n}\n");
    }
}
