//! Text rendering of JSON reports. Works on the report value alone, so the
//! text view never disagrees with the JSON one.

use serde_json::{Map, Value};

pub fn render_pretty(report: &Value) -> String {
    let mut out = String::new();
    match report {
        Value::Object(map) => render_object(map, 0, &mut out),
        other => {
            out.push_str(&inline(other));
            out.push('\n');
        }
    }
    out
}

fn inline(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => {
            let parts: Vec<String> = map.iter().map(|(k, v)| format!("{k}: {}", inline(v))).collect();
            format!("{{{}}}", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => !items.iter().any(Value::is_object),
        _ => true,
    }
}

fn render_object(map: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let width = map.iter().filter(|(_, v)| is_flat(v)).map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in map.iter().filter(|(_, v)| is_flat(v)) {
        out.push_str(&format!("{pad}{k:<width$}  {}\n", inline(v)));
    }
    for (k, v) in map.iter().filter(|(_, v)| !is_flat(v)) {
        out.push_str(&format!("{pad}{k}:\n"));
        match v {
            Value::Object(inner) => render_object(inner, indent + 2, out),
            Value::Array(items) => render_table(items, indent + 2, out),
            _ => unreachable!("flat values handled above"),
        }
    }
}

/// An array of objects becomes one row per object; narrow columns come first.
fn render_table(rows: &[Value], indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    if rows.is_empty() {
        out.push_str(&format!("{pad}(none)\n"));
        return;
    }
    let mut columns: Vec<String> = Vec::new();
    for row in rows {
        if let Value::Object(m) = row {
            for k in m.keys() {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
        }
    }
    let width_of = |c: &String| rows.iter().map(|r| r.get(c).map(inline).unwrap_or_default().chars().count()).max();
    columns.sort_by_key(|c| (width_of(c), c.clone()));
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| columns.iter().map(|c| row.get(c).map(inline).unwrap_or_default()).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(j, c)| cells.iter().map(|r| r[j].chars().count()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let line = |items: &[String]| -> String {
        let parts: Vec<String> =
            items.iter().zip(&widths).map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count()))).collect();
        format!("{pad}{}\n", parts.join("  ").trim_end())
    };
    out.push_str(&line(&columns));
    out.push_str(&line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>()));
    for r in &cells {
        out.push_str(&line(r));
    }
}
