//! Deterministic rendering: floats at 17 significant digits, keys in
//! insertion order.

use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: u64 = 1;

/// `d.dddddddddddddddde±x`, or `null` for non-finite values.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

fn fmt_number(n: &serde_json::Number) -> String {
    if let Some(i) = n.as_i64() {
        i.to_string()
    } else if let Some(u) = n.as_u64() {
        u.to_string()
    } else {
        fmt_f64(n.as_f64().unwrap_or(f64::NAN))
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&fmt_number(n)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

pub fn to_json(v: &Value) -> String {
    let mut s = String::new();
    write_value(v, 0, &mut s);
    s.push('\n');
    s
}

/// Dotted-path leaves of a JSON tree, in document order.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn go(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| go(&join(k), x, out)),
            Value::Array(a) => a
                .iter()
                .enumerate()
                .for_each(|(i, x)| go(&join(&i.to_string()), x, out)),
            Value::Null => out.push((prefix.into(), String::new())),
            Value::Bool(b) => out.push((prefix.into(), b.to_string())),
            Value::Number(n) => out.push((prefix.into(), fmt_number(n))),
            Value::String(s) => out.push((prefix.into(), s.clone())),
        }
    }
    let mut out = Vec::new();
    go("", v, &mut out);
    out
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn key_value_csv(v: &Value) -> Result<String, CliError> {
    let rows: Vec<Vec<String>> = flatten(v).into_iter().map(|(k, x)| vec![k, x]).collect();
    to_csv(&["key", "value"], &rows)
}
