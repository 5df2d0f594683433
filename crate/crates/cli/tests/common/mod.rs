#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qec-blueprint"))
}

pub fn run(args: &[&str]) -> Output {
    bin().arg("--quiet").args(args).output().expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

pub fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

pub fn schema(name: &str) -> Value {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "schemas", name].iter().collect();
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

/// Validates `value` against the subset of JSON Schema used by the shipped
/// schemas: type, enum, required, properties, additionalProperties, items,
/// oneOf, minimum and pattern (anchored digit runs only).
pub fn validate(schema: &Value, value: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    check(schema, value, "$", &mut errors);
    errors
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "integer" => v.is_u64() || v.is_i64(),
        "number" => v.is_number(),
        other => panic!("unsupported schema type {other}"),
    }
}

fn check(s: &Value, v: &Value, path: &str, errors: &mut Vec<String>) {
    if let Some(alts) = s.get("oneOf").and_then(Value::as_array) {
        let hits = alts.iter().filter(|a| validate(a, v).is_empty()).count();
        if hits != 1 {
            errors.push(format!("{path}: {hits} oneOf branches match"));
        }
        return;
    }
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::String(t) => type_matches(t, v),
            Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)),
            _ => panic!("bad type keyword"),
        };
        if !ok {
            errors.push(format!("{path}: expected {t}, got {v}"));
            return;
        }
    }
    if let Some(options) = s.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            errors.push(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let (Some(min), Some(x)) = (s.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            errors.push(format!("{path}: {x} below {min}"));
        }
    }
    if let (Some(pat), Some(x)) = (s.get("pattern").and_then(Value::as_str), v.as_str()) {
        assert_eq!(pat, "^[0-9]+$", "unsupported pattern");
        if x.is_empty() || !x.bytes().all(|b| b.is_ascii_digit()) {
            errors.push(format!("{path}: '{x}' does not match {pat}"));
        }
    }
    if let Some(obj) = v.as_object() {
        for r in s.get("required").and_then(Value::as_array).into_iter().flatten() {
            if !obj.contains_key(r.as_str().unwrap()) {
                errors.push(format!("{path}: missing {r}"));
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (k, x) in obj {
            let sub = format!("{path}.{k}");
            match (props.and_then(|p| p.get(k)), s.get("additionalProperties")) {
                (Some(ps), _) => check(ps, x, &sub, errors),
                (None, Some(Value::Bool(false))) => errors.push(format!("{path}: unexpected key {k}")),
                (None, Some(extra @ Value::Object(_))) => check(extra, x, &sub, errors),
                _ => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            check(items, x, &format!("{path}[{i}]"), errors);
        }
    }
}

pub fn assert_schema(name: &str, value: &Value) {
    let errors = validate(&schema(name), value);
    assert!(errors.is_empty(), "{name}:\n  {}", errors.join("\n  "));
}
