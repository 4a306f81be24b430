//! Run reports: an ordered list of fields rendered as `key = value` lines
//! or as one JSON object.

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    Int(i64),
    Real(f64),
    Bool(bool),
}

/// Fixed 9-decimal formatting used everywhere numbers are printed.
pub fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        let s = format!("{v:.9}");
        if s == "-0.000000000" { "0.000000000".into() } else { s }
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    fields: Vec<(String, Field)>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.text("command", command);
        r
    }

    pub fn text(&mut self, key: &str, v: impl Into<String>) -> &mut Self {
        self.fields.push((key.into(), Field::Text(v.into())));
        self
    }

    pub fn int(&mut self, key: &str, v: impl TryInto<i64>) -> &mut Self {
        self.fields.push((key.into(), Field::Int(v.try_into().unwrap_or(i64::MAX))));
        self
    }

    pub fn real(&mut self, key: &str, v: f64) -> &mut Self {
        self.fields.push((key.into(), Field::Real(v)));
        self
    }

    pub fn flag(&mut self, key: &str, v: bool) -> &mut Self {
        self.fields.push((key.into(), Field::Bool(v)));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn fields(&self) -> &[(String, Field)] {
        &self.fields
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            let value = match v {
                Field::Text(s) => s.clone(),
                Field::Int(i) => i.to_string(),
                Field::Real(x) => fmt_real(*x),
                Field::Bool(b) => b.to_string(),
            };
            out.push_str(&format!("{k} = {value}\n"));
        }
        out
    }

    /// Reals are rounded to 9 decimals before serialization; non-finite
    /// values become strings.
    pub fn to_json(&self) -> String {
        let mut map = Map::new();
        for (k, v) in &self.fields {
            let value = match v {
                Field::Text(s) => Value::String(s.clone()),
                Field::Int(i) => Value::from(*i),
                Field::Real(x) => {
                    let s = fmt_real(*x);
                    match s.parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
                        Some(n) if x.is_finite() => Value::Number(n),
                        _ => Value::String(s),
                    }
                }
                Field::Bool(b) => Value::Bool(*b),
            };
            map.insert(k.clone(), value);
        }
        let mut s = serde_json::to_string(&Value::Object(map)).expect("report serializes");
        s.push('\n');
        s
    }
}
