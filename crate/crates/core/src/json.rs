//! JSON rendering of basic forms.
//!
//! `{"alternatives": [{"binders": [..], "test": "t" | null, "entries": {"a": "t"}}]}`
//! with terms in the printed syntax. `null` is the empty list.

use serde_json::{json, Map, Value};

use crate::calculus::{Alternative, BasicForm};

pub fn alternative_to_json(a: &Alternative) -> Value {
    let entries: Map<String, Value> = a
        .entries
        .iter()
        .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
        .collect();
    json!({
        "binders": a.binders.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "test": a.test.as_ref().map(|t| t.value().to_string()),
        "entries": entries,
    })
}

pub fn basic_form_to_json(b: &BasicForm) -> Value {
    json!({
        "alternatives": b.alternatives().iter().map(alternative_to_json).collect::<Vec<_>>(),
    })
}
