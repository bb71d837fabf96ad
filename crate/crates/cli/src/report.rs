//! Report model and its two serializations. Struct fields are declared in sorted order so
//! serde emits sorted keys; every number is carried as a string.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use serde::Serialize;

pub const SCHEMA: &str = "acyclica.report/v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub detail: String,
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub name: String,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Table {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            name: name.to_string(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Stringify a row of display values.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($x.to_string()),*] };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
    pub params: BTreeMap<String, String>,
    pub pass: bool,
    pub suite: String,
    pub tables: Vec<Table>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> SuiteReport {
        SuiteReport {
            checks: Vec::new(),
            params: BTreeMap::new(),
            pass: true,
            suite: suite.to_string(),
            tables: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.pass &= pass;
        self.checks.push(Check {
            detail: detail.into(),
            name: name.to_string(),
            pass,
        });
    }
}

/// The reproducible part of a report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Body {
    pub config: BTreeMap<String, String>,
    pub master_seed: String,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub suites: BTreeMap<String, String>,
    pub total_seconds: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub body: Body,
    pub schema: &'static str,
    pub timing: Timing,
}

impl Report {
    pub fn empty() -> Report {
        Report {
            body: Body {
                pass: true,
                ..Body::default()
            },
            schema: SCHEMA,
            timing: Timing::default(),
        }
    }
}

pub fn seconds(d: std::time::Duration) -> String {
    format!("{:.6}", d.as_secs_f64())
}

pub fn write_json(report: &Report, out: &mut impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, report)?;
    writeln!(out)?;
    Ok(())
}

/// Long form: one record per cell, `suite,table,row,column,value`. Config and verdict rows
/// use the empty suite; timing rows come last under the table name `timing` and are the
/// only non-canonical records.
pub fn write_csv(report: &Report, out: &mut impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["suite", "table", "row", "column", "value"])?;
    w.write_record(["", "schema", "0", "schema", report.schema])?;
    for (k, v) in &report.body.config {
        w.write_record(["", "config", "0", k, v])?;
    }
    w.write_record(["", "master_seed", "0", "master_seed", &report.body.master_seed])?;
    w.write_record(["", "verdict", "0", "pass", &report.body.pass.to_string()])?;
    for s in &report.body.suites {
        for (k, v) in &s.params {
            w.write_record([&s.suite, "params", "0", k, v])?;
        }
        w.write_record([s.suite.as_str(), "verdict", "0", "pass", &s.pass.to_string()])?;
        for (i, c) in s.checks.iter().enumerate() {
            let i = i.to_string();
            w.write_record([s.suite.as_str(), "checks", &i, "check", &c.name])?;
            w.write_record([s.suite.as_str(), "checks", &i, "pass", &c.pass.to_string()])?;
            w.write_record([s.suite.as_str(), "checks", &i, "detail", &c.detail])?;
        }
        for t in &s.tables {
            for (i, r) in t.rows.iter().enumerate() {
                let i = i.to_string();
                for (c, v) in t.columns.iter().zip(r) {
                    w.write_record([&s.suite, &t.name, &i, c, v])?;
                }
            }
        }
    }
    for (suite, secs) in &report.timing.suites {
        w.write_record([suite.as_str(), "timing", "0", "seconds", secs])?;
    }
    w.write_record(["", "timing", "0", "seconds", &report.timing.total_seconds])?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys_sorted(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Object(map) => {
                let keys: Vec<&String> = map.keys().collect();
                keys.windows(2).all(|w| w[0] < w[1]) && map.values().all(keys_sorted)
            }
            serde_json::Value::Array(items) => items.iter().all(keys_sorted),
            serde_json::Value::Number(_) => false,
            _ => true,
        }
    }

    fn sample() -> Report {
        let mut s = SuiteReport::new("x");
        s.param("m", 2);
        s.check("c", true, "fine, really");
        let mut t = Table::new("t", &["position", "dim"]);
        t.push(row![-1, 3]);
        s.tables.push(t);
        let mut r = Report::empty();
        r.body.suites.push(s);
        r
    }

    #[test]
    fn empty_report_is_canonical() {
        let mut buf = Vec::new();
        write_json(&Report::empty(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(keys_sorted(&v));
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["body"]["suites"], serde_json::json!([]));
        assert_eq!(v["body"]["pass"], true);
    }

    #[test]
    fn keys_sorted_and_numbers_are_strings() {
        let mut buf = Vec::new();
        write_json(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let order: Vec<usize> = ["\"body\"", "\"schema\"", "\"timing\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
        assert!(keys_sorted(&serde_json::from_str(&text).unwrap()));
    }

    #[test]
    fn csv_quotes_commas() {
        let mut buf = Vec::new();
        write_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("x,checks,0,detail,\"fine, really\""));
        assert!(text.contains("x,t,0,position,-1"));
    }
}
