//! Canonical JSON and plain-text rendering of denotations.
//!
//! Acceptances serialize as `null` (for `•`) or a sorted string array;
//! tick-tock observations as `{"evt": name}` or `{"ref": sorted array}`.
//! Reports are `{"model": …, "depth": …, "traces": […]}` with traces sorted
//! by length and then lexicographically on their canonical JSON text, so a
//! report is byte-identical across runs.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use tockpri_core::fl::FlDenotation;
use tockpri_core::fl_trace::{Acceptance, FlTrace};
use tockpri_core::tt::TtDenotation;
use tockpri_core::tt_trace::{TtObs, TtTrace};
use tockpri_core::Event;

fn names(set: &BTreeSet<Event>) -> Value {
    // BTreeSet iterates symbols first, then tick, then tock; re-sort by
    // name so the JSON array is plain lexicographic.
    let mut v: Vec<&str> = set.iter().map(|e| e.name()).collect();
    v.sort_unstable();
    Value::Array(v.into_iter().map(|s| Value::String(s.to_string())).collect())
}

pub fn acc_json(a: &Acceptance) -> Value {
    match a {
        Acceptance::Null => Value::Null,
        Acceptance::Set(s) => names(s),
    }
}

pub fn fl_trace_json(t: &FlTrace) -> Value {
    let cells: Vec<Value> = t
        .cells()
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("acc".into(), acc_json(c.acc()));
            m.insert("evt".into(), Value::String(c.event().name().to_string()));
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("cells".into(), Value::Array(cells));
    m.insert("final".into(), acc_json(t.final_acc()));
    Value::Object(m)
}

pub fn tt_obs_json(o: &TtObs) -> Value {
    match o {
        TtObs::Evt(e) => json!({ "evt": e.name() }),
        TtObs::Ref(x) => {
            let mut m = Map::new();
            m.insert("ref".into(), names(x));
            Value::Object(m)
        }
    }
}

pub fn tt_trace_json(t: &TtTrace) -> Value {
    Value::Array(t.obs().iter().map(tt_obs_json).collect())
}

fn sorted_traces<T, F: Fn(&T) -> Value>(items: Vec<(usize, &T)>, render: F) -> Vec<Value> {
    let mut rendered: Vec<(usize, String, Value)> = items
        .into_iter()
        .map(|(len, t)| {
            let v = render(t);
            (len, v.to_string(), v)
        })
        .collect();
    rendered.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    rendered.into_iter().map(|(_, _, v)| v).collect()
}

fn report(model: &str, depth: usize, traces: Vec<Value>) -> Value {
    let mut m = Map::new();
    m.insert("model".into(), Value::String(model.to_string()));
    m.insert("depth".into(), Value::Number(depth.into()));
    m.insert("traces".into(), Value::Array(traces));
    Value::Object(m)
}

pub fn fl_report(d: &FlDenotation, depth: usize) -> Value {
    let items = d.traces.iter().map(|t| (t.len(), t)).collect();
    report("fl", depth, sorted_traces(items, fl_trace_json))
}

pub fn tt_report(d: &TtDenotation, model: &str, depth: usize) -> Value {
    let items = d.traces.iter().map(|t| (t.len(), t)).collect();
    report(model, depth, sorted_traces(items, tt_trace_json))
}

/// One-line plain-text form of an FL trace, e.g. `<({a,b},a), {a}>`.
pub fn fl_trace_text(t: &FlTrace) -> String {
    let mut parts: Vec<String> = t
        .cells()
        .iter()
        .map(|c| format!("({},{})", acc_text(c.acc()), c.event().name()))
        .collect();
    parts.push(acc_text(t.final_acc()));
    format!("<{}>", parts.join(", "))
}

fn acc_text(a: &Acceptance) -> String {
    match a {
        Acceptance::Null => "*".to_string(),
        Acceptance::Set(s) => {
            let mut v: Vec<&str> = s.iter().map(|e| e.name()).collect();
            v.sort_unstable();
            format!("{{{}}}", v.join(","))
        }
    }
}

/// One-line plain-text form of a tick-tock trace, e.g. `<ref{a,tick}, evt tock>`.
pub fn tt_trace_text(t: &TtTrace) -> String {
    let parts: Vec<String> = t
        .obs()
        .iter()
        .map(|o| match o {
            TtObs::Evt(e) => format!("evt {}", e.name()),
            TtObs::Ref(x) => {
                let mut v: Vec<&str> = x.iter().map(|e| e.name()).collect();
                v.sort_unstable();
                format!("ref{{{}}}", v.join(","))
            }
        })
        .collect();
    format!("<{}>", parts.join(", "))
}

/// Plain-text report: a count line followed by one trace per line, in the
/// same canonical order as the JSON form.
pub fn table_report(v: &Value) -> String {
    let model = v["model"].as_str().unwrap_or("?");
    let depth = &v["depth"];
    let traces = v["traces"].as_array().cloned().unwrap_or_default();
    let mut out = format!("model {model}, depth {depth}: {} traces\n", traces.len());
    for t in traces {
        out.push_str(&render_value_line(&t));
        out.push('\n');
    }
    out
}

fn render_value_line(t: &Value) -> String {
    match t {
        Value::Object(m) if m.contains_key("cells") => {
            let cells = m["cells"].as_array().cloned().unwrap_or_default();
            let mut parts: Vec<String> = cells
                .iter()
                .map(|c| {
                    format!(
                        "({},{})",
                        acc_value_text(&c["acc"]),
                        c["evt"].as_str().unwrap_or("?")
                    )
                })
                .collect();
            parts.push(acc_value_text(&m["final"]));
            format!("<{}>", parts.join(", "))
        }
        Value::Array(obs) => {
            let parts: Vec<String> = obs
                .iter()
                .map(|o| {
                    if let Some(e) = o.get("evt") {
                        format!("evt {}", e.as_str().unwrap_or("?"))
                    } else {
                        let set = o["ref"].as_array().cloned().unwrap_or_default();
                        let v: Vec<&str> =
                            set.iter().filter_map(|x| x.as_str()).collect();
                        format!("ref{{{}}}", v.join(","))
                    }
                })
                .collect();
            format!("<{}>", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn acc_value_text(a: &Value) -> String {
    match a {
        Value::Null => "*".to_string(),
        Value::Array(xs) => {
            let v: Vec<&str> = xs.iter().filter_map(|x| x.as_str()).collect();
            format!("{{{}}}", v.join(","))
        }
        other => other.to_string(),
    }
}
