use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub type Fields = Vec<(&'static str, Value)>;

/// One command's output. Numbers are carried as strings so rendering is exact.
#[derive(Debug, Default)]
pub struct Report {
    pub command: &'static str,
    pub params: Fields,
    pub result: Fields,
    /// Tabular commands fill this alongside `result`.
    pub table: Option<Table>,
    pub pass: Option<bool>,
    pub timing_ms: Option<u128>,
}

#[derive(Debug)]
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Value>>,
}

pub fn text(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

fn object(fields: &Fields) -> Map<String, Value> {
    fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            ..Default::default()
        }
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => Ok(self.json()),
            Format::Csv => self.csv().map_err(|e| e.to_string()),
        }
    }

    fn json(&self) -> String {
        let mut result = object(&self.result);
        if let Some(pass) = self.pass {
            result.insert("pass".into(), Value::Bool(pass));
        }
        if let Some(t) = &self.table {
            let rows = t.rows.iter().map(|row| {
                let fields = t.columns.iter().zip(row).map(|(k, v)| (k.to_string(), v.clone()));
                Value::Object(fields.collect())
            });
            result.insert("rows".into(), Value::Array(rows.collect()));
        }
        let mut top = Map::new();
        top.insert("command".into(), text(self.command));
        top.insert("params".into(), Value::Object(object(&self.params)));
        top.insert("result".into(), Value::Object(result));
        if let Some(ms) = self.timing_ms {
            top.insert("timing_ms".into(), Value::from(ms as u64));
        }
        let mut out = serde_json::to_string_pretty(&Value::Object(top)).expect("plain values serialize");
        out.push('\n');
        out
    }

    /// Tables give one line per row; other commands a single line of params then results.
    fn csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(t) = &self.table {
            w.write_record(t.columns)?;
            for row in &t.rows {
                w.write_record(row.iter().map(cell))?;
            }
        } else {
            let mut fields: Vec<(&str, String)> = vec![("command", self.command.to_string())];
            fields.extend(self.params.iter().map(|(k, v)| (*k, cell(v))));
            fields.extend(self.result.iter().map(|(k, v)| (*k, cell(v))));
            if let Some(pass) = self.pass {
                fields.push(("pass", pass.to_string()));
            }
            if let Some(ms) = self.timing_ms {
                fields.push(("timing_ms", ms.to_string()));
            }
            w.write_record(fields.iter().map(|(k, _)| *k))?;
            w.write_record(fields.iter().map(|(_, v)| v.as_str()))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("eval");
        r.params = vec![("spec", text("T(1,2bar; 3)"))];
        r.result = vec![("value", text("1.5")), ("error_bound", text("1e-30"))];
        r.pass = Some(true);
        r
    }

    #[test]
    fn json_keeps_field_order() {
        let out = sample().render(Format::Json).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["command", "params", "result"]);
        let result: Vec<_> = v["result"].as_object().unwrap().keys().cloned().collect();
        assert_eq!(result, ["value", "error_bound", "pass"]);
    }

    #[test]
    fn csv_quotes_commas() {
        let out = sample().render(Format::Csv).unwrap();
        assert_eq!(out, "command,spec,value,error_bound,pass\neval,\"T(1,2bar; 3)\",1.5,1e-30,true\n");
    }

    #[test]
    fn rows_render_as_table() {
        let mut r = Report::new("table");
        r.table = Some(Table {
            columns: &["p", "q"],
            rows: vec![vec![text("1"), text("2")], vec![text("2"), text("2")]],
        });
        assert_eq!(r.render(Format::Csv).unwrap(), "p,q\n1,2\n2,2\n");
        let v: Value = serde_json::from_str(&r.render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 2);
        assert_eq!(v["result"]["rows"][1]["p"], "2");
    }

    #[test]
    fn empty_table_keeps_header() {
        let mut r = Report::new("table");
        r.table = Some(Table { columns: &["p", "q"], rows: vec![] });
        assert_eq!(r.render(Format::Csv).unwrap(), "p,q\n");
    }
}
