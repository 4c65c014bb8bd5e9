//! Persistence-diagram JSON files.
//!
//! `{"dim": k, "points": [[b, d], ...]}` with `d` written as the string
//! `"inf"` for essential classes. Points are emitted sorted by `(b, d)`.
//! Writers may add a `"config"` member; readers ignore unknown members.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;

fn encode(x: f64) -> Value {
    if x.is_infinite() {
        Value::from("inf")
    } else {
        json!(x)
    }
}

fn decode(v: &Value) -> Result<f64> {
    match v {
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::DiagramFormat(format!("bad number {n}"))),
        other => Err(Error::DiagramFormat(format!("expected number or \"inf\", got {other}"))),
    }
}

pub fn diagram_to_json(d: &PersistenceDiagram, config: Option<&Value>) -> Value {
    let points: Vec<Value> = d
        .sorted_points()
        .into_iter()
        .map(|(b, dd)| Value::Array(vec![encode(b), encode(dd)]))
        .collect();
    let mut obj = Map::new();
    obj.insert("dim".into(), json!(d.dim()));
    obj.insert("points".into(), Value::Array(points));
    if let Some(c) = config {
        obj.insert("config".into(), c.clone());
    }
    Value::Object(obj)
}

pub fn diagram_to_string(d: &PersistenceDiagram, config: Option<&Value>) -> String {
    let mut s = serde_json::to_string_pretty(&diagram_to_json(d, config)).expect("plain JSON");
    s.push('\n');
    s
}

pub fn diagram_from_json(v: &Value) -> Result<PersistenceDiagram> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::DiagramFormat("missing integer \"dim\"".into()))?;
    let raw = v
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::DiagramFormat("missing array \"points\"".into()))?;
    let points = raw
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([b, d]) => Ok((decode(b)?, decode(d)?)),
            _ => Err(Error::DiagramFormat(format!("point {p} is not a [b, d] pair"))),
        })
        .collect::<Result<Vec<_>>>()?;
    PersistenceDiagram::new(dim as usize, points)
}

pub fn diagram_from_str(text: &str) -> Result<PersistenceDiagram> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::DiagramFormat(e.to_string()))?;
    diagram_from_json(&v)
}

pub fn read_diagram(path: impl AsRef<Path>) -> Result<PersistenceDiagram> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    diagram_from_str(&text)
}

pub fn write_diagram(path: impl AsRef<Path>, d: &PersistenceDiagram, config: Option<&Value>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, diagram_to_string(d, config)).map_err(|e| Error::io(path, e))
}
