use std::io::Write;

use serde_json::{Map, Number, Value};

/// One flat output record; field order is preserved.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: Vec<(String, Field)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &str, v: f64) -> Self {
        self.fields.push((key.to_string(), Field::Num(v)));
        self
    }

    pub fn int(mut self, key: &str, v: u64) -> Self {
        self.fields.push((key.to_string(), Field::Int(v)));
        self
    }

    pub fn text(mut self, key: &str, v: impl Into<String>) -> Self {
        self.fields.push((key.to_string(), Field::Text(v.into())));
        self
    }

    pub fn flag(mut self, key: &str, v: bool) -> Self {
        self.fields.push((key.to_string(), Field::Flag(v)));
        self
    }

    /// Appends the fields of `other` whose keys are not present yet.
    pub fn merge(mut self, other: &Record) -> Self {
        for (k, v) in &other.fields {
            if self.get(k).is_none() {
                self.fields.push((k.clone(), v.clone()));
            }
        }
        self
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|(k, _)| k.as_str())
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.fields {
            let value = match v {
                Field::Num(x) => Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
                Field::Int(i) => Value::from(*i),
                Field::Text(s) => Value::from(s.as_str()),
                Field::Flag(b) => Value::from(*b),
            };
            map.insert(k.clone(), value);
        }
        Value::Object(map)
    }
}

impl Field {
    pub fn to_csv(&self) -> String {
        match self {
            Field::Num(x) => format!("{x:.16e}"),
            Field::Int(i) => i.to_string(),
            Field::Text(s) => s.clone(),
            Field::Flag(b) => b.to_string(),
        }
    }
}

/// Writes a header row and one row per record; missing fields are empty.
pub fn write_csv<W: Write>(out: W, header: &[String], rows: &[Record]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(header.iter().map(|k| r.get(k).map(Field::to_csv).unwrap_or_default()))?;
    }
    w.flush()?;
    Ok(())
}
