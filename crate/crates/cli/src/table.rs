//! Tabular output in CSV and JSON.

use serde_json::{Map, Value};

pub const UNITS_NOTE: &str = "all quantities in units of omega_a";

/// Significant digits in CSV output.
pub const SIG_DIGITS: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// `%g`-style formatting with a fixed number of significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
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

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(v) => format_sig(*v, SIG_DIGITS),
                Cell::Int(v) => v.to_string(),
                Cell::Text(s) => s.clone(),
                Cell::Empty => String::new(),
            }))?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8 csv");
        Ok(format!("# {UNITS_NOTE}\n{body}"))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
                            Cell::Int(v) => Value::from(*v),
                            Cell::Text(s) => Value::from(s.as_str()),
                            Cell::Empty => Value::Null,
                        };
                        (k.clone(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({
            "units": UNITS_NOTE,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable table");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let doc: Value = serde_json::from_str(s).map_err(|e| e.to_string())?;
        let columns: Vec<String> = doc["columns"]
            .as_array()
            .ok_or("missing `columns`")?
            .iter()
            .map(|c| c.as_str().map(str::to_owned).ok_or("non-string column name"))
            .collect::<Result<_, _>>()?;
        let mut table = Table::new(columns.clone());
        for row in doc["rows"].as_array().ok_or("missing `rows`")? {
            let obj = row.as_object().ok_or("row is not an object")?;
            let cells = columns
                .iter()
                .map(|c| match obj.get(c) {
                    None | Some(Value::Null) => Ok(Cell::Empty),
                    Some(Value::String(s)) => Ok(Cell::Text(s.clone())),
                    Some(Value::Number(n)) if n.is_i64() => Ok(Cell::Int(n.as_i64().unwrap())),
                    Some(Value::Number(n)) => n.as_f64().map(Cell::Num).ok_or_else(|| format!("bad number in `{c}`")),
                    Some(other) => Err(format!("unexpected value {other} in `{c}`")),
                })
                .collect::<Result<_, String>>()?;
            table.push(cells);
        }
        Ok(table)
    }

    pub fn render(&self, format: Format) -> Result<String, csv::Error> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }
}
