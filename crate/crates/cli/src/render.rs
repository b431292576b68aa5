//! Human-readable rendering of a JSON report.
//!
//! This only re-lays out the machine report, so both formats always carry the
//! same content.

use serde_json::Value;

const GREEN: &str = "\x1b[32m";
const RED: &str = "\x1b[31m";
const RESET: &str = "\x1b[0m";

pub fn human(v: &Value, color: bool) -> String {
    let mut out = String::new();
    block(v, 0, color, &mut out);
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar(v: &Value, color: bool) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Bool(b) if color => format!("{}{b}{RESET}", if *b { GREEN } else { RED }),
        other => other.to_string(),
    }
}

fn inline(v: &Value, color: bool) -> Option<String> {
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => Some(format!(
            "[{}]",
            items
                .iter()
                .map(|x| scalar(x, color))
                .collect::<Vec<_>>()
                .join(", ")
        )),
        Value::Array(items) if items.is_empty() => Some("[]".into()),
        v if is_scalar(v) => Some(scalar(v, color)),
        _ => None,
    }
}

fn block(v: &Value, depth: usize, color: bool, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match inline(val, color) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        block(val, depth + 1, color, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match inline(item, color) {
                    Some(s) => out.push_str(&format!("{pad}{s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        block(item, depth + 1, color, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other, color))),
    }
}
