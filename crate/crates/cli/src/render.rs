//! Output documents and their JSON, CSV and table renderings.
//!
//! Floats use Rust's shortest round-trip formatting, so output is byte-stable for
//! fixed inputs.

use exptype::scenario::OutputFormat;
use serde_json::{json, Map, Value};

/// Column-major numeric data for plots.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// A failed property, reported with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub property: &'static str,
    pub location: Value,
    pub observed: f64,
    pub bound: f64,
}

impl Violation {
    pub fn to_json(&self) -> Value {
        json!({
            "property": self.property,
            "location": self.location,
            "observed": self.observed,
            "bound": self.bound,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub summary: Map<String, Value>,
    pub table: Option<Table>,
    pub violation: Option<Violation>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            summary: Map::new(),
            table: None,
            violation: None,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_owned(), value.into());
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.json(),
            OutputFormat::Csv => self.csv(),
            OutputFormat::Table => self.table_text(),
        }
    }

    fn json(&self) -> String {
        let mut doc = Map::new();
        doc.insert("command".into(), self.command.into());
        doc.extend(self.summary.clone());
        if let Some(t) = &self.table {
            doc.insert("columns".into(), json!(t.columns));
            doc.insert("rows".into(), json!(t.rows));
        }
        if let Some(v) = &self.violation {
            doc.insert("violation".into(), v.to_json());
        }
        let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        out.push('\n');
        out
    }

    /// The grid table when there is one, otherwise `key,value` pairs.
    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let result = match &self.table {
            Some(t) => w.write_record(&t.columns).and_then(|_| {
                t.rows
                    .iter()
                    .try_for_each(|row| w.write_record(row.iter().map(|&x| number(x))))
            }),
            None => w.write_record(["key", "value"]).and_then(|_| {
                std::iter::once(("command", Value::from(self.command)))
                    .chain(self.summary.iter().map(|(k, v)| (k.as_str(), v.clone())))
                    .try_for_each(|(k, v)| w.write_record([k.to_owned(), scalar(&v)]))
            }),
        };
        result.expect("writing to memory");
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
    }

    fn table_text(&self) -> String {
        let mut out = String::new();
        let width = self
            .summary
            .keys()
            .map(String::len)
            .max()
            .unwrap_or(0)
            .max("command".len());
        out.push_str(&format!("{:width$}  {}\n", "command", self.command));
        for (k, v) in &self.summary {
            out.push_str(&format!("{k:width$}  {}\n", scalar(v)));
        }
        if let Some(t) = &self.table {
            let cells: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|r| r.iter().map(|&x| number(x)).collect())
                .collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|j| {
                    cells
                        .iter()
                        .map(|r| r[j].len())
                        .chain([t.columns[j].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |fields: Vec<&str>| {
                let padded: Vec<String> = fields
                    .iter()
                    .zip(&widths)
                    .map(|(f, &w)| format!("{f:>w$}"))
                    .collect();
                padded.join("  ") + "\n"
            };
            out.push('\n');
            out.push_str(&line(t.columns.clone()));
            for r in &cells {
                out.push_str(&line(r.iter().map(String::as_str).collect()));
            }
        }
        if let Some(v) = &self.violation {
            out.push_str(&format!("\nviolation  {}\n", v.to_json()));
        }
        out
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn number(x: f64) -> String {
    format!("{x:?}")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => n.as_f64().map_or_else(|| n.to_string(), number),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("eval");
        r.set("sigma", 1.0);
        r.set("label", "hb");
        r.set("count", 3);
        r.table = Some(Table {
            columns: vec!["x", "y"],
            rows: vec![vec![0.1, 1e-20], vec![2.0, f64::NAN]],
        });
        r
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -1.593_624_260_040_04, 1e-300, 6.02e23] {
            assert_eq!(number(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(number(2.0), "2.0");
    }

    #[test]
    fn csv_uses_the_table() {
        let text = sample().render(OutputFormat::Csv);
        assert_eq!(text, "x,y\n0.1,1e-20\n2.0,NaN\n");
        let mut r = sample();
        r.table = None;
        let text = r.render(OutputFormat::Csv);
        assert_eq!(
            text,
            "key,value\ncommand,eval\ncount,3\nlabel,hb\nsigma,1.0\n"
        );
    }

    #[test]
    fn json_is_stable() {
        let a = sample().render(OutputFormat::Json);
        assert_eq!(a, sample().render(OutputFormat::Json));
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["command"], "eval");
        assert_eq!(v["rows"][1][1], Value::Null);
    }

    #[test]
    fn table_aligns_columns() {
        let text = sample().render(OutputFormat::Table);
        assert!(
            text.contains("\n  x      y\n0.1  1e-20\n2.0    NaN\n"),
            "{text}"
        );
    }
}
