//! Column tables and their CSV / JSON serialization.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

/// Significant digits written for every number.
pub const SIG_DIGITS: usize = 12;

/// A header and rows of optional numbers; `None` is written as an empty CSV
/// field or a JSON `null`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn write_csv(&self, out: &mut (impl Write + ?Sized)) -> std::io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|v| v.map(fmt_num).unwrap_or_default())
                .collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    /// Records as JSON objects keyed by column, numbers rounded as in CSV.
    pub fn json_records(&self) -> Value {
        let records = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, v)| (h.clone(), v.map(rounded).map_or(Value::Null, Value::from)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(records)
    }

    pub fn write_json(
        &self,
        config: &impl Serialize,
        out: &mut (impl Write + ?Sized),
    ) -> std::io::Result<()> {
        let mut doc = Map::new();
        doc.insert("config".into(), serde_json::to_value(config)?);
        doc.insert("records".into(), self.json_records());
        serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
        writeln!(out)
    }
}

fn rounded(v: f64) -> f64 {
    fmt_num(v).parse().unwrap_or(v)
}

/// `%.12g`-style formatting: fixed notation for decimal exponents in
/// `[-4, 12)`, scientific otherwise, trailing zeros removed.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mant), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
