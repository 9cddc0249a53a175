//! Table rendering of command output.

use serde_json::Value;

/// Flattens a JSON document into `path<TAB>value` lines, numbers rounded to
/// four decimals.
pub fn render_table(value: &Value) -> String {
    let mut out = String::new();
    walk(value, String::new(), &mut out);
    out
}

fn walk(value: &Value, path: String, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                walk(v, p, out);
            }
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            let cells: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{path}\t{}\n", cells.join(",")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                walk(v, format!("{path}[{i}]"), out);
            }
        }
        other => out.push_str(&format!("{path}\t{}\n", scalar(other))),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format!("{:.4}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        _ => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_and_rounds() {
        let t = render_table(&json!({"a": 1.23456, "b": {"c": [1, 2.0]}, "d": null}));
        assert_eq!(t, "a\t1.2346\nb.c\t1,2.0000\nd\t-\n");
    }
}
