//! Result document assembly and emission.
//!
//! Every subcommand produces one [`Document`]: the subcommand name, the
//! resolved configuration, a `results` array of flat rows, and a `checks`
//! array auditing any inequalities or identities the run asserted. JSON
//! emits the whole document; CSV flattens the `results` rows only (the
//! checks are an audit trail, not sweep data).

use crate::config::{OutputFormat, RunConfig};
use gauss_spectral::report::Check;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Serialize)]
pub struct Document {
    pub command: String,
    pub config: RunConfig,
    pub results: Vec<Value>,
    pub checks: Vec<Check>,
}

impl Document {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Document {
            command: command.to_string(),
            config: config.clone(),
            results: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Render in the configured format and write to the configured sink.
    pub fn emit(&self) -> Result<(), String> {
        let rendered = match self.config.format {
            OutputFormat::Json => {
                let mut text = serde_json::to_string_pretty(self)
                    .map_err(|e| format!("serialize: {e}"))?;
                text.push('\n');
                text
            }
            OutputFormat::Csv => csv_of_rows(&self.results)?,
        };
        match &self.config.out {
            Some(path) => std::fs::write(path, rendered)
                .map_err(|e| format!("write {}: {e}", path.display())),
            None => {
                print!("{rendered}");
                Ok(())
            }
        }
    }
}

/// Build one row from (key, value) pairs. The default `serde_json::Map`
/// iterates in sorted key order, which keeps both JSON and the derived
/// CSV header deterministic.
pub fn row(pairs: &[(&str, Value)]) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert((*k).to_string(), v.clone());
    }
    Value::Object(map)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// RFC 4180 output with a header row. The header is the union of the
/// row keys; each row contributes its keys in sorted order, so the
/// header is deterministic for a fixed command and config.
fn csv_of_rows(rows: &[Value]) -> Result<String, String> {
    if rows.is_empty() {
        // A check-only command (no sweep rows) renders as an empty file;
        // the csv writer would otherwise emit one empty quoted field.
        return Ok(String::new());
    }
    let mut header: Vec<String> = Vec::new();
    for r in rows {
        let obj = r
            .as_object()
            .ok_or_else(|| "csv output requires flat result rows".to_string())?;
        for k in obj.keys() {
            if !header.iter().any(|h| h == k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).map_err(|e| e.to_string())?;
    for r in rows {
        let obj = r.as_object().expect("checked above");
        let record: Vec<String> = header
            .iter()
            .map(|k| obj.get(k).map(|v| cell(v)).unwrap_or_default())
            .collect();
        w.write_record(&record).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_quotes_embedded_commas_and_keeps_header_order() {
        let rows = vec![
            row(&[("b", json!(1.5)), ("a", json!("x,y"))]),
            row(&[("b", json!(2)), ("c", json!(true))]),
        ];
        let text = csv_of_rows(&rows).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "a,b,c");
        assert_eq!(lines.next().unwrap(), "\"x,y\",1.5,");
        assert_eq!(lines.next().unwrap(), ",2,true");
    }

    #[test]
    fn empty_results_render_as_an_empty_csv() {
        assert_eq!(csv_of_rows(&[]).unwrap(), "");
    }
}
