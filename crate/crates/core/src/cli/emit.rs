//! CSV and JSON rendering of a run: a config echo, a table of rows, and diagnostics.
//!
//! Floats are written in shortest round-trip form, so the same run always
//! produces the same bytes. JSON object keys come out sorted.

use serde_json::{Map, Value};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub meta: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub diagnostics: Map<String, Value>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn diag(&mut self, key: &str, value: impl Into<Value>) {
        self.diagnostics.insert(key.to_string(), value.into());
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> =
                    self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect();
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("meta".into(), Value::Object(self.meta.clone()));
        top.insert("rows".into(), Value::Array(rows));
        top.insert("diagnostics".into(), Value::Object(self.diagnostics.clone()));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    /// Header, rows, then `# key,value` footer lines for the diagnostics.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (k, v) in &self.diagnostics {
            out.push_str(&format!("# {k},{}\n", csv_cell(v)));
        }
        out
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// JSON number for a float; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}
