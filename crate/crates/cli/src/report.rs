//! Report values and the two output views.
//!
//! Every command builds one `serde_json::Value`. `--format json` prints it
//! as is; `--format table` renders the same tree, formatting numbers with
//! the JSON serializer so both views show identical digits.

use nilborn::Amplitude;
use serde_json::{json, Map, Value};

pub fn complex(z: Amplitude) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn complex_vec<'a>(zs: impl IntoIterator<Item = &'a Amplitude>) -> Value {
    Value::Array(zs.into_iter().map(|&z| complex(z)).collect())
}

/// Finite floats become numbers; others become the strings "inf", "-inf", "nan".
pub fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn as_complex(v: &Value) -> Option<(&serde_json::Number, &serde_json::Number)> {
    let obj = v.as_object()?;
    if obj.len() != 2 {
        return None;
    }
    Some((obj.get("re")?.as_number()?, obj.get("im")?.as_number()?))
}

fn scalar(v: &Value) -> String {
    if let Some((re, im)) = as_complex(v) {
        let im_s = im.to_string();
        return match im_s.strip_prefix('-') {
            Some(abs) => format!("{re}-{abs}i"),
            None => format!("{re}+{im_s}i"),
        };
    }
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(is_inline) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn is_inline(v: &Value) -> bool {
    as_complex(v).is_some() || !(v.is_object() || v.is_array())
}

/// Rows of objects that share one key set render as a column table.
fn uniform_rows(items: &[Value]) -> Option<Vec<&String>> {
    let first = items.first()?.as_object()?;
    let keys: Vec<&String> = first.keys().collect();
    for item in items {
        let obj = item.as_object()?;
        if as_complex(item).is_some()
            || obj.len() != keys.len()
            || !keys
                .iter()
                .all(|k| obj.get(*k).is_some_and(|v| is_inline(v) || v.is_array()))
        {
            return None;
        }
    }
    Some(keys)
}

pub fn render_table(v: &Value) -> String {
    let mut out = String::new();
    match v.as_object() {
        Some(obj) => render_object(obj, 0, &mut out),
        None => out.push_str(&format!("{}\n", scalar(v))),
    }
    out
}

fn render_object(obj: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let width = obj
        .iter()
        .filter(|(_, v)| is_inline(v) || (v.is_array() && is_flat_array(v)))
        .map(|(k, _)| k.len())
        .max()
        .unwrap_or(0);
    for (key, value) in obj {
        match value {
            Value::Object(inner) if as_complex(value).is_none() => {
                out.push_str(&format!("{pad}{key}:\n"));
                render_object(inner, indent + 2, out);
            }
            Value::Array(items) if !is_flat_array(value) => {
                out.push_str(&format!("{pad}{key}:\n"));
                render_array(items, indent + 2, out);
            }
            _ => out.push_str(&format!("{pad}{key:<width$}  {}\n", scalar(value))),
        }
    }
}

fn is_flat_array(v: &Value) -> bool {
    v.as_array()
        .is_some_and(|items| items.iter().all(is_inline))
}

fn render_array(items: &[Value], indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    if let Some(keys) = uniform_rows(items) {
        let cells: Vec<Vec<String>> = items
            .iter()
            .map(|item| keys.iter().map(|k| scalar(&item[k.as_str()])).collect())
            .collect();
        let widths: Vec<usize> = keys
            .iter()
            .enumerate()
            .map(|(c, k)| {
                cells
                    .iter()
                    .map(|row| row[c].len())
                    .max()
                    .unwrap_or(0)
                    .max(k.len())
            })
            .collect();
        let line = |row: Vec<&str>| {
            let parts: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect();
            format!("{pad}{}\n", parts.join("  ").trim_end())
        };
        out.push_str(&line(keys.iter().map(|k| k.as_str()).collect()));
        for row in &cells {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
        return;
    }
    for item in items {
        match item.as_object() {
            Some(obj) if as_complex(item).is_none() => {
                out.push_str(&format!("{pad}-\n"));
                render_object(obj, indent + 2, out);
            }
            _ => out.push_str(&format!("{pad}- {}\n", scalar(item))),
        }
    }
}
