use std::collections::BTreeMap;

use serde_json::json;

use super::{Metrics, Solution};

/// `{"type":"solution","bindings":{..},"context":[..]}` on one line.
pub fn solution_record(s: &Solution) -> String {
    let bindings: BTreeMap<String, String> = s
        .bindings
        .iter()
        .map(|(v, t)| (v.to_string(), t.to_string()))
        .collect();
    json!({
        "type": "solution",
        "bindings": bindings,
        "context": s.context.to_strings(),
    })
    .to_string()
}

pub fn metrics_record(m: &Metrics) -> String {
    json!({
        "type": "metrics",
        "inferences": m.inferences,
        "table_bytes": m.table_bytes,
        "table_entries": m.table_entries,
        "table_answers": m.table_answers,
        "wall_ms": m.wall_ms,
    })
    .to_string()
}
