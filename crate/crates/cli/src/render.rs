//! Human, CSV and JSON renderings. Floats in CSV and JSON carry 17
//! significant digits, so every value round-trips.

use crate::args::Format;
use harnack_core::certify::{Sample, Section, VerificationReport};
use serde_json::{json, Map, Number, Value};
use std::collections::BTreeMap;
use std::fmt::Write;

pub struct Check {
    pub name: String,
    pub worst: f64,
    pub tol: f64,
    pub pass: bool,
}

pub struct Verdict {
    pub pass: bool,
    pub checks: Vec<Check>,
}

pub enum Doc {
    Value {
        command: &'static str,
        params: BTreeMap<String, String>,
        name: String,
        value: f64,
    },
    Table {
        command: &'static str,
        params: BTreeMap<String, String>,
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
    },
    Report {
        command: &'static str,
        report: VerificationReport,
        samples: usize,
    },
    Trace {
        command: &'static str,
        params: BTreeMap<String, String>,
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
        verdict: Verdict,
    },
}

impl Doc {
    /// None for plain evaluations.
    pub fn pass(&self) -> Option<bool> {
        match self {
            Doc::Report { report, .. } => Some(report.pass),
            Doc::Trace { verdict, .. } => Some(verdict.pass),
            _ => None,
        }
    }
}

pub fn render(doc: &Doc, format: Format) -> String {
    match format {
        Format::Human => human(doc),
        Format::Csv => csv(doc),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&to_json(doc)).expect("serializable");
            s.push('\n');
            s
        }
    }
}

fn fixed(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn jnum(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(fixed(x).parse::<Number>().expect("finite float"))
    } else {
        Value::Null
    }
}

fn jvec(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| jnum(x)).collect())
}

fn short(x: f64) -> String {
    format!("{x:.6e}")
}

fn at(columns: &[String], loc: &[f64]) -> String {
    columns
        .iter()
        .zip(loc)
        .map(|(c, x)| format!("{c}={x}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn param_line(command: &str, params: &BTreeMap<String, String>) -> String {
    let mut s = command.to_string();
    for (k, v) in params {
        let _ = write!(s, " {k}={v}");
    }
    s
}

fn human(doc: &Doc) -> String {
    let mut s = String::new();
    match doc {
        Doc::Value { value, .. } => {
            let _ = writeln!(s, "{value:?}");
        }
        Doc::Table { command, params, columns, rows } => {
            let _ = writeln!(s, "{}", param_line(command, params));
            human_table(&mut s, columns, rows);
        }
        Doc::Report { command, report, samples } => human_report(&mut s, command, report, *samples),
        Doc::Trace {
            command,
            params,
            columns,
            rows,
            verdict,
        } => {
            let _ = writeln!(s, "{}", param_line(command, params));
            human_table(&mut s, columns, rows);
            for c in &verdict.checks {
                let _ = writeln!(
                    s,
                    "  {:<14} worst {:>14}  tol {:>8}  {}",
                    c.name,
                    short(c.worst),
                    short(c.tol),
                    if c.pass { "ok" } else { "FAIL" }
                );
            }
            let _ = writeln!(s, "{}", if verdict.pass { "PASS" } else { "FAIL" });
        }
    }
    s
}

fn human_table(s: &mut String, columns: &[String], rows: &[Vec<f64>]) {
    let w = columns.iter().map(|c| c.len()).max().unwrap_or(0).max(13);
    let head: Vec<String> = columns.iter().map(|c| format!("{c:>w$}")).collect();
    let _ = writeln!(s, "{}", head.join(" "));
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .map(|&x| if x.is_nan() { format!("{:>w$}", "-") } else { format!("{:>w$}", short(x)) })
            .collect();
        let _ = writeln!(s, "{}", cells.join(" "));
    }
}

fn human_report(s: &mut String, command: &str, r: &VerificationReport, samples: usize) {
    let _ = writeln!(s, "{}", param_line(command, &r.params));
    let _ = writeln!(
        s,
        "{:<22} {:>8} {:>8} {:>10} {:>14}  worst at",
        "section", "asserted", "count", "violations", "worst slack"
    );
    for sec in &r.sections {
        let _ = writeln!(
            s,
            "{:<22} {:>8} {:>8} {:>10} {:>14}  {}",
            sec.name,
            if sec.asserted { "yes" } else { "no" },
            sec.count(),
            sec.violations,
            short(sec.worst_slack),
            at(&sec.columns, &sec.worst_location)
        );
    }
    for (k, v) in &r.metrics {
        let _ = writeln!(s, "metric {k} = {v:?}");
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    let worst = r.sections.iter().filter(|x| x.asserted).max_by(|a, b| {
        a.worst_slack
            .total_cmp(&b.worst_slack)
            .then(b.name.cmp(&a.name))
    });
    if let Some(sec) = worst {
        if samples > 0 {
            let _ = writeln!(s, "worst samples ({}):", sec.name);
            for x in sec.worst_samples(samples) {
                let _ = writeln!(
                    s,
                    "  {}  lhs {}  rhs {}  slack {}",
                    at(&sec.columns, &x.location),
                    short(x.lhs),
                    short(x.rhs),
                    short(x.slack)
                );
            }
        }
    }
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    let _ = writeln!(
        s,
        "{verdict}: {} violations, worst slack {} in {} at {} (tolerance {})",
        r.violations,
        short(r.worst_slack),
        r.worst_section,
        r.sections
            .iter()
            .find(|x| x.name == r.worst_section)
            .map_or(String::new(), |x| at(&x.columns, &r.worst_location)),
        r.tolerance
    );
}

fn csv(doc: &Doc) -> String {
    let mut s = String::new();
    let header = |s: &mut String, command: &str, params: &BTreeMap<String, String>| {
        let _ = writeln!(s, "# command={command}");
        for (k, v) in params {
            let _ = writeln!(s, "# {k}={v}");
        }
    };
    let rows = |s: &mut String, columns: &[String], rows: &[Vec<f64>]| {
        let _ = writeln!(s, "{}", columns.join(","));
        for r in rows {
            let cells: Vec<String> = r.iter().map(|&x| fixed(x)).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
    };
    match doc {
        Doc::Value {
            command,
            params,
            name,
            value,
        } => {
            header(&mut s, command, params);
            let _ = writeln!(s, "name,value\n{name},{}", fixed(*value));
        }
        Doc::Table {
            command,
            params,
            columns,
            rows: r,
        } => {
            header(&mut s, command, params);
            rows(&mut s, columns, r);
        }
        Doc::Report { command, report, .. } => {
            header(&mut s, command, &report.params);
            for sec in &report.sections {
                let _ = writeln!(
                    s,
                    "# section={} asserted={} count={} violations={} tolerance={} worst_slack={} worst_location={}",
                    sec.name,
                    sec.asserted,
                    sec.count(),
                    sec.violations,
                    fixed(sec.tolerance),
                    fixed(sec.worst_slack),
                    sec.worst_location.iter().map(|&x| fixed(x)).collect::<Vec<_>>().join(";")
                );
            }
            for (k, v) in &report.metrics {
                let _ = writeln!(s, "# metric {k}={}", fixed(*v));
            }
            for n in &report.notes {
                let _ = writeln!(s, "# note: {n}");
            }
            let _ = writeln!(
                s,
                "# pass={} violations={} worst_slack={} worst_section={}",
                report.pass,
                report.violations,
                fixed(report.worst_slack),
                report.worst_section
            );
            match &report.table {
                Some(t) => rows(&mut s, &t.columns, &t.rows),
                None => {
                    let p = report.primary();
                    let mut cols = p.columns.clone();
                    cols.extend(["lhs", "rhs", "slack"].map(String::from));
                    let r: Vec<Vec<f64>> = p.samples.iter().map(sample_row).collect();
                    rows(&mut s, &cols, &r);
                }
            }
        }
        Doc::Trace {
            command,
            params,
            columns,
            rows: r,
            verdict,
        } => {
            header(&mut s, command, params);
            for c in &verdict.checks {
                let _ = writeln!(s, "# check={} worst={} tolerance={} pass={}", c.name, fixed(c.worst), fixed(c.tol), c.pass);
            }
            let _ = writeln!(s, "# pass={}", verdict.pass);
            rows(&mut s, columns, r);
        }
    }
    s
}

fn sample_row(x: &Sample) -> Vec<f64> {
    let mut r = x.location.clone();
    r.extend([x.lhs, x.rhs, x.slack]);
    r
}

fn params_json(p: &BTreeMap<String, String>) -> Value {
    Value::Object(p.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect())
}

fn sample_json(x: &Sample) -> Value {
    json!({"location": jvec(&x.location), "lhs": jnum(x.lhs), "rhs": jnum(x.rhs), "slack": jnum(x.slack)})
}

fn section_json(sec: &Section) -> Value {
    json!({
        "name": sec.name,
        "asserted": sec.asserted,
        "tolerance": jnum(sec.tolerance),
        "columns": sec.columns,
        "count": sec.count(),
        "violations": sec.violations,
        "worst_slack": jnum(sec.worst_slack),
        "worst_location": jvec(&sec.worst_location),
        "pass": sec.pass(),
    })
}

fn to_json(doc: &Doc) -> Value {
    match doc {
        Doc::Value {
            command,
            params,
            name,
            value,
        } => json!({"command": command, "params": params_json(params), "name": name, "value": jnum(*value)}),
        Doc::Table {
            command,
            params,
            columns,
            rows,
        } => json!({
            "command": command,
            "params": params_json(params),
            "columns": columns,
            "rows": rows.iter().map(|r| jvec(r)).collect::<Vec<_>>(),
        }),
        Doc::Report { command, report: r, samples } => {
            let mut m = Map::new();
            m.insert("command".into(), json!(command));
            m.insert("params".into(), params_json(&r.params));
            m.insert("worst_slack".into(), jnum(r.worst_slack));
            m.insert("worst_location".into(), jvec(&r.worst_location));
            m.insert("worst_section".into(), json!(r.worst_section));
            m.insert("violations".into(), json!(r.violations));
            m.insert("pass".into(), json!(r.pass));
            m.insert("tolerance".into(), jnum(r.tolerance));
            m.insert("sections".into(), Value::Array(r.sections.iter().map(section_json).collect()));
            let p = r.primary();
            m.insert("sample_columns".into(), json!(p.columns));
            m.insert(
                "samples".into(),
                Value::Array(p.worst_samples(*samples).into_iter().map(sample_json).collect()),
            );
            m.insert(
                "metrics".into(),
                Value::Object(r.metrics.iter().map(|(k, v)| (k.clone(), jnum(*v))).collect()),
            );
            m.insert("notes".into(), json!(r.notes));
            if let Some(t) = &r.table {
                m.insert(
                    "table".into(),
                    json!({"columns": t.columns, "rows": t.rows.iter().map(|x| jvec(x)).collect::<Vec<_>>()}),
                );
            }
            Value::Object(m)
        }
        Doc::Trace {
            command,
            params,
            columns,
            rows,
            verdict,
        } => json!({
            "command": command,
            "params": params_json(params),
            "columns": columns,
            "rows": rows.iter().map(|r| jvec(r)).collect::<Vec<_>>(),
            "checks": verdict.checks.iter().map(|c| json!({
                "name": c.name, "worst": jnum(c.worst), "tolerance": jnum(c.tol), "pass": c.pass
            })).collect::<Vec<_>>(),
            "pass": verdict.pass,
        }),
    }
}
