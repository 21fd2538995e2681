//! Golden-vector runner. Each case is a `padiq` invocation with an expected
//! exit code and an expected subset of its JSON output.

use std::path::Path;

use serde_json::{json, Value};

use crate::app::{run, CliError, Output};

pub const BUNDLED: &str = include_str!("../fixtures/golden.json");

/// Every key of `expected` appears in `actual` with a matching value;
/// arrays must agree in length.
pub fn json_subset(expected: &Value, actual: &Value) -> bool {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => e.iter().all(|(k, v)| a.get(k).is_some_and(|av| json_subset(v, av))),
        (Value::Array(e), Value::Array(a)) => e.len() == a.len() && e.iter().zip(a).all(|(x, y)| json_subset(x, y)),
        _ => expected == actual,
    }
}

pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub fn run_case(case: &Value) -> CaseResult {
    let name = case["name"].as_str().unwrap_or("<unnamed>").to_string();
    let argv: Vec<String> = std::iter::once("padiq".to_string())
        .chain(case["argv"].as_array().into_iter().flatten().filter_map(|a| a.as_str().map(String::from)))
        .collect();
    let want_exit = case["exit"].as_i64().unwrap_or(0) as i32;
    let (code, out, err) = run(argv);
    if code != want_exit {
        return CaseResult { name, passed: false, detail: format!("exit {} (expected {}): {}", code, want_exit, err.trim()) };
    }
    if let Some(expect) = case.get("expect") {
        let actual: Value = match serde_json::from_str(&out) {
            Ok(v) => v,
            Err(e) => return CaseResult { name, passed: false, detail: format!("output is not JSON: {}", e) },
        };
        if !json_subset(expect, &actual) {
            return CaseResult { name, passed: false, detail: format!("got {}", actual) };
        }
    }
    CaseResult { name, passed: true, detail: String::new() }
}

pub fn verify(file: Option<&Path>) -> Result<Output, CliError> {
    let text = match file {
        Some(f) => std::fs::read_to_string(f).map_err(|e| CliError::Usage(format!("cannot read {}: {}", f.display(), e)))?,
        None => BUNDLED.to_string(),
    };
    let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad fixture file: {}", e)))?;
    let cases = doc["cases"].as_array().ok_or_else(|| CliError::Usage("fixture file has no \"cases\" array".into()))?;
    let results: Vec<CaseResult> = cases.iter().map(run_case).collect();
    let passed = results.iter().filter(|r| r.passed).count();
    let mut text = String::new();
    for r in &results {
        if r.passed {
            text += &format!("PASS {}\n", r.name);
        } else {
            text += &format!("FAIL {}: {}\n", r.name, r.detail);
        }
    }
    text += &format!("{}/{} fixtures passed\n", passed, results.len());
    let j = json!({
        "passed": passed,
        "total": results.len(),
        "all_passed": passed == results.len(),
        "cases": results.iter().map(|r| json!({ "name": r.name, "passed": r.passed, "detail": r.detail })).collect::<Vec<_>>(),
    });
    Ok(Output { json: j, text })
}
