//! Run reports and their two renderings.
//!
//! A report is an ordered JSON object. The text form is a YAML-like
//! listing of the same object, one fact per line, so runs diff cleanly.

use serde_json::{Map, Value};

pub struct RunReport {
    pub command: &'static str,
    pub config: Map<String, Value>,
    pub status: String,
    pub result: Map<String, Value>,
    pub timing_ms: Option<u128>,
}

impl RunReport {
    pub fn to_json(&self) -> Value {
        let mut top = Map::new();
        top.insert("command".into(), self.command.into());
        top.insert("config".into(), Value::Object(self.config.clone()));
        top.insert("status".into(), self.status.clone().into());
        top.insert("result".into(), Value::Object(self.result.clone()));
        if let Some(ms) = self.timing_ms {
            top.insert("timing_ms".into(), (ms as u64).into());
        }
        Value::Object(top)
    }

    /// Command, configuration and status first, then the payload.
    pub fn to_text(&self) -> String {
        let mut top = Map::new();
        top.insert("command".into(), self.command.into());
        for (k, v) in &self.config {
            top.insert(k.clone(), v.clone());
        }
        top.insert("status".into(), self.status.clone().into());
        for (k, v) in &self.result {
            top.insert(k.clone(), v.clone());
        }
        if let Some(ms) = self.timing_ms {
            top.insert("timing_ms".into(), (ms as u64).into());
        }
        let mut out = Vec::new();
        render_map(&top, 0, &mut out);
        let mut text = out.join("\n");
        text.push('\n');
        text
    }
}

/// One-line form of scalars and of flat numeric arrays.
fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(Value::is_number) => Some(format!(
            "[{}]",
            items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn render_map(map: &Map<String, Value>, indent: usize, out: &mut Vec<String>) {
    let pad = " ".repeat(indent);
    for (k, v) in map {
        if let Some(s) = inline(v) {
            out.push(format!("{pad}{k}: {s}"));
            continue;
        }
        match v {
            Value::Array(items) if items.is_empty() => out.push(format!("{pad}{k}: []")),
            Value::Array(items) => {
                out.push(format!("{pad}{k}:"));
                for item in items {
                    render_item(item, indent + 2, out);
                }
            }
            Value::Object(inner) => {
                out.push(format!("{pad}{k}:"));
                render_map(inner, indent + 2, out);
            }
            _ => unreachable!("scalars are inline"),
        }
    }
}

fn render_item(item: &Value, indent: usize, out: &mut Vec<String>) {
    let pad = " ".repeat(indent);
    match item {
        Value::Object(inner) if !inner.is_empty() => {
            let start = out.len();
            render_map(inner, indent + 2, out);
            out[start].replace_range(indent..indent + 2, "- ");
        }
        Value::Array(inner) if inline(item).is_none() && !inner.is_empty() => {
            out.push(format!("{pad}-"));
            for x in inner {
                render_item(x, indent + 2, out);
            }
        }
        other => {
            let s = inline(other).unwrap_or_else(|| "[]".into());
            out.push(format!("{pad}- {s}"));
        }
    }
}
