//! Plain-text rendering of reports.

use std::fmt::Write;

use serde_json::Value;

use crate::run::Report;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

/// A table when every row is an object with scalar fields.
fn table(out: &mut String, indent: usize, rows: &[Value]) -> bool {
    let Some(Value::Object(first)) = rows.first() else { return false };
    let cols: Vec<&String> = first.keys().collect();
    let mut cells = vec![cols.iter().map(|c| c.to_string()).collect::<Vec<_>>()];
    for r in rows {
        let Value::Object(m) = r else { return false };
        let Some(row) = cols.iter().map(|c| m.get(*c).and_then(scalar)).collect::<Option<Vec<_>>>() else { return false };
        cells.push(row);
    }
    let widths: Vec<usize> = (0..cols.len()).map(|i| cells.iter().map(|r| r[i].chars().count()).max().unwrap_or(0)).collect();
    for r in cells {
        let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{:indent$}{}", "", line.join("  ").trim_end());
    }
    true
}

fn value(out: &mut String, indent: usize, key: &str, v: &Value) {
    if let Some(s) = scalar(v) {
        let _ = writeln!(out, "{:indent$}{key}: {s}", "");
        return;
    }
    let _ = writeln!(out, "{:indent$}{key}:", "");
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| value(out, indent + 2, k, x)),
        Value::Array(a) => {
            if !table(out, indent + 2, a) {
                a.iter().enumerate().for_each(|(i, x)| value(out, indent + 2, &format!("[{i}]"), x));
            }
        }
        _ => unreachable!("scalars are handled above"),
    }
}

/// Render a report as indented `key: value` lines, with arrays of flat
/// records as aligned tables.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verb: {}", r.verb);
    value(&mut out, 0, "results", &r.results);
    if !r.certificate.is_null() {
        value(&mut out, 0, "certificate", &r.certificate);
    }
    out
}
