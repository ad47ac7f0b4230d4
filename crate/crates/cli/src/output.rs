//! Report assembly and format emission.
//!
//! JSON uses serde_json's sorted maps, so key order is stable. CSV emits
//! one row per result item. Markdown renders enumeration results in the
//! three-column reference-table layout.

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
    Text,
}

/// Wrap a command's result object with the invocation echo.
pub fn report(command: &str, config: Value, results: Value) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), Value::String(command.to_string()));
    m.insert("config".into(), config);
    m.insert(
        "timestamp_unix".into(),
        Value::from(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        ),
    );
    m.insert("results".into(), results);
    Value::Object(m)
}

pub fn emit(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("serializable report");
            s.push('\n');
            s
        }
        Format::Csv => emit_csv(report),
        Format::Markdown => emit_markdown(report),
        Format::Text => {
            let mut out = String::new();
            emit_text(report, 0, &mut out);
            out
        }
    }
}

fn table_rows(report: &Value) -> Option<&Vec<Value>> {
    report
        .get("results")
        .and_then(|r| r.get("rows"))
        .and_then(Value::as_array)
}

fn scalar_to_string(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit_csv(report: &Value) -> String {
    let mut out = String::new();
    if let Some(rows) = table_rows(report) {
        out.push_str("n,rho,field\n");
        for row in rows {
            let n = row.get("n").map(scalar_to_string).unwrap_or_default();
            let rho = row.get("rho").map(scalar_to_string).unwrap_or_default();
            let field = row.get("field").map(scalar_to_string).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{}\n",
                csv_quote(&n),
                csv_quote(&rho),
                csv_quote(&field)
            ));
        }
    } else {
        out.push_str("key,value\n");
        let mut items = Vec::new();
        flatten("", report, &mut items);
        for (k, v) in items {
            out.push_str(&format!("{},{}\n", csv_quote(&k), csv_quote(&v)));
        }
    }
    out
}

fn emit_markdown(report: &Value) -> String {
    let mut out = String::new();
    if let Some(rows) = table_rows(report) {
        out.push_str("| N | \u{03c1} | Field |\n");
        out.push_str("| --- | --- | --- |\n");
        for row in rows {
            let n = row.get("n").map(scalar_to_string).unwrap_or_default();
            let rho = row.get("rho").map(scalar_to_string).unwrap_or_default();
            let field = row.get("field").map(scalar_to_string).unwrap_or_default();
            out.push_str(&format!("| {n} | {rho} | {field} |\n"));
        }
    } else {
        out.push_str("| key | value |\n| --- | --- |\n");
        let mut items = Vec::new();
        flatten("", report, &mut items);
        for (k, v) in items {
            out.push_str(&format!("| {k} | {v} |\n"));
        }
    }
    out
}

fn emit_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, val) in m {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        emit_text(val, indent + 1, out);
                    }
                    other => {
                        out.push_str(&format!("{pad}{k}: {}\n", scalar_to_string(other)));
                    }
                }
            }
        }
        Value::Array(a) => {
            for val in a {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        emit_text(val, indent + 1, out);
                    }
                    other => {
                        out.push_str(&format!("{pad}- {}\n", scalar_to_string(other)));
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_to_string(other))),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, val) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, val, out);
            }
        }
        Value::Array(a) => {
            for (i, val) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), val, out);
            }
        }
        other => out.push((prefix.to_string(), scalar_to_string(other))),
    }
}
