//! Report documents and their text, CSV and JSON renderings.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Str(String),
    Num(f64),
    Int(i64),
    Bool(bool),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

#[derive(Clone, Debug)]
pub enum Body {
    Value(Cell),
    Fields(Vec<(String, Cell)>),
    Table { headers: Vec<String>, rows: Vec<Vec<Cell>> },
}

#[derive(Clone, Debug)]
pub struct Section {
    pub title: String,
    pub body: Body,
}

/// An ordered list of titled sections.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub sections: Vec<Section>,
}

impl Document {
    pub fn value(mut self, title: &str, v: impl Into<Cell>) -> Self {
        self.sections.push(Section {
            title: title.into(),
            body: Body::Value(v.into()),
        });
        self
    }

    pub fn fields(mut self, title: &str, fields: Vec<(&str, Cell)>) -> Self {
        self.sections.push(Section {
            title: title.into(),
            body: Body::Fields(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect()),
        });
        self
    }

    pub fn table(mut self, title: &str, headers: &[&str], rows: Vec<Vec<Cell>>) -> Self {
        self.sections.push(Section {
            title: title.into(),
            body: Body::Table {
                headers: headers.iter().map(|h| h.to_string()).collect(),
                rows,
            },
        });
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            match &s.body {
                Body::Value(c) => out.push_str(&format!("{}\n", text_cell(c))),
                Body::Fields(fields) => {
                    out.push_str(&format!("[{}]\n", s.title));
                    let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                    for (k, v) in fields {
                        out.push_str(&format!("{k:<width$}  {}\n", text_cell(v)));
                    }
                }
                Body::Table { headers, rows } => {
                    out.push_str(&format!("[{}]\n", s.title));
                    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(text_cell).collect()).collect();
                    let widths: Vec<usize> = headers
                        .iter()
                        .enumerate()
                        .map(|(j, h)| cells.iter().map(|r| r[j].len()).chain([h.len()]).max().unwrap_or(0))
                        .collect();
                    let line = |items: Vec<(String, bool)>| {
                        let parts: Vec<String> = items
                            .into_iter()
                            .zip(&widths)
                            .map(|((s, right), &w)| if right { format!("{s:>w$}") } else { format!("{s:<w$}") })
                            .collect();
                        format!("{}\n", parts.join("  ").trim_end())
                    };
                    let numeric: Vec<bool> = (0..headers.len())
                        .map(|j| rows.first().is_some_and(|r| matches!(r[j], Cell::Num(_) | Cell::Int(_))))
                        .collect();
                    out.push_str(&line(headers.iter().cloned().zip(numeric.iter().copied()).collect()));
                    for r in cells {
                        out.push_str(&line(r.into_iter().zip(numeric.iter().copied()).collect()));
                    }
                }
            }
        }
        out
    }

    fn csv(&self) -> String {
        let single = self.sections.len() == 1;
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if !single {
                out.push_str(&format!("# {}\n", s.title));
            }
            match &s.body {
                Body::Value(c) => out.push_str(&format!("{}\n{}\n", csv_field(&s.title), csv_cell(c))),
                Body::Fields(fields) => {
                    out.push_str("key,value\n");
                    for (k, v) in fields {
                        out.push_str(&format!("{},{}\n", csv_field(k), csv_cell(v)));
                    }
                }
                Body::Table { headers, rows } => {
                    let h: Vec<String> = headers.iter().map(|h| csv_field(h)).collect();
                    out.push_str(&format!("{}\n", h.join(",")));
                    for r in rows {
                        let r: Vec<String> = r.iter().map(csv_cell).collect();
                        out.push_str(&format!("{}\n", r.join(",")));
                    }
                }
            }
        }
        out
    }

    fn json(&self) -> String {
        let mut root = Map::new();
        for s in &self.sections {
            let v = match &s.body {
                Body::Value(c) => json_cell(c),
                Body::Fields(fields) => Value::Object(fields.iter().map(|(k, v)| (k.clone(), json_cell(v))).collect()),
                Body::Table { headers, rows } => Value::Array(
                    rows.iter()
                        .map(|r| Value::Object(headers.iter().cloned().zip(r.iter().map(json_cell)).collect()))
                        .collect(),
                ),
            };
            root.insert(s.title.clone(), v);
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values serialize");
        text.push('\n');
        text
    }
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Six decimal places.
pub fn fmt_text(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        s[1..].to_string()
    } else {
        s
    }
}

/// C's `%.17g`: 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_g17(x: f64) -> String {
    let x = clean(x);
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let strip = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip(mantissa.to_string()), exp.abs())
    } else {
        let decimals = (16 - exp).max(0) as usize;
        strip(format!("{:.*}", decimals, x))
    }
}

fn text_cell(c: &Cell) -> String {
    match c {
        Cell::Str(s) => s.clone(),
        Cell::Num(x) => fmt_text(*x),
        Cell::Int(n) => n.to_string(),
        Cell::Bool(b) => b.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Str(s) => csv_field(s),
        Cell::Num(x) => fmt_g17(*x),
        Cell::Int(n) => n.to_string(),
        Cell::Bool(b) => b.to_string(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Str(s) => Value::String(s.clone()),
        Cell::Num(x) => serde_json::Number::from_f64(clean(*x)).map_or(Value::Null, Value::Number),
        Cell::Int(n) => Value::from(*n),
        Cell::Bool(b) => Value::Bool(*b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_printf() {
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(2.0_f64.sqrt()), "1.4142135623730951");
        assert_eq!(fmt_g17(1.5e-7), "1.4999999999999999e-07");
        assert_eq!(fmt_g17(-0.0), "0");
        assert_eq!(fmt_g17(123456.0), "123456");
        assert_eq!(fmt_g17(1e20), "1e+20");
        for x in [0.1, 1.0 / 3.0, 1.8112781244591327, 7.3e-300] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn text_uses_six_decimals() {
        assert_eq!(fmt_text(2.0), "2.000000");
        assert_eq!(fmt_text(-1e-17), "0.000000");
        assert_eq!(fmt_text(-0.0), "0.000000");
    }

    #[test]
    fn renderings() {
        let d = Document::default()
            .value("verdict", "CONSISTENT")
            .table("t", &["history", "p"], vec![vec!["(0)".into(), 0.5.into()], vec!["(1)".into(), 0.5.into()]]);
        let text = d.render(Format::Text);
        assert!(text.starts_with("CONSISTENT\n\n[t]\nhistory"));
        let csv = d.render(Format::Csv);
        assert!(csv.contains("history,p\n(0),0.5\n"));
        let json: Value = serde_json::from_str(&d.render(Format::Json)).unwrap();
        assert_eq!(json["t"][1]["p"], 0.5);
        let single = Document::default().value("entropy", 2.0);
        assert_eq!(single.render(Format::Text), "2.000000\n");
        assert_eq!(single.render(Format::Csv), "entropy\n2\n");
    }
}
