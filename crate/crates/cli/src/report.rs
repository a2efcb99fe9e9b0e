//! Line-delimited JSON reports and the CSV summary.
//!
//! The first line is a header with the wall-clock time and timings; every
//! other line depends only on the config and the seed.

use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::runner::{Outcome, Status};

pub const TOOL: &str = "colldyn";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn header(kind: &str, timings: Value) -> Value {
    let unix_time = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    json!({
        "type": "header",
        "report": kind,
        "tool": TOOL,
        "version": VERSION,
        "unix_time": unix_time,
        "timings_ms": timings,
    })
}

/// Exit code for a set of outcomes: 2 beats 1 beats 0.
pub fn exit_code(outcomes: &[Outcome]) -> i32 {
    outcomes
        .iter()
        .map(|o| match o.status {
            Status::Ok => 0,
            Status::Invalid => 1,
            Status::Internal => 2,
        })
        .max()
        .unwrap_or(0)
}

pub fn render_run(cfg: &ExperimentConfig, outcomes: &[Outcome]) -> String {
    let timings: serde_json::Map<String, Value> = outcomes
        .iter()
        .map(|o| (o.name.clone(), json!(o.elapsed_ms)))
        .collect();
    let mut lines = vec![header("run", Value::Object(timings))];
    lines.push(json!({
        "type": "config",
        "seed": cfg.seed,
        "rng": colldyn_core::RNG_NAME,
        "config": serde_json::to_value(cfg).expect("config serializes"),
    }));
    for (i, o) in outcomes.iter().enumerate() {
        lines.push(json!({
            "type": "analysis",
            "index": i,
            "name": o.name,
            "op": o.op,
            "status": o.status.as_str(),
            "verdict": o.verdict,
            "semantics": o.semantics,
            "detail": o.detail,
            "result": o.result,
        }));
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| o.status != Status::Ok)
        .map(|o| o.name.as_str())
        .collect();
    lines.push(json!({
        "type": "summary",
        "analyses": outcomes.len(),
        "ok": outcomes.len() - failed.len(),
        "failed": failed,
        "exit_code": exit_code(outcomes),
    }));
    to_jsonl(&lines)
}

pub fn to_jsonl(lines: &[Value]) -> String {
    let mut out = String::new();
    for l in lines {
        out.push_str(&l.to_string());
        out.push('\n');
    }
    out
}

pub fn render_csv(outcomes: &[Outcome]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "name", "op", "status", "verdict", "semantics", "detail"])
        .expect("in-memory write");
    for (i, o) in outcomes.iter().enumerate() {
        let verdict = o.verdict.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([
            i.to_string().as_str(),
            &o.name,
            o.op,
            o.status.as_str(),
            &verdict,
            &o.semantics,
            &o.detail,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Drops the header line, which holds the only non-deterministic fields.
pub fn body(report: &str) -> &str {
    report.split_once('\n').map_or("", |(_, rest)| rest)
}

fn require(line: &Value, n: usize, fields: &[&str]) -> Result<(), String> {
    for f in fields {
        if line.get(f).is_none() {
            return Err(format!("line {n}: missing field '{f}'"));
        }
    }
    Ok(())
}

/// Checks a report against the published line schema.
pub fn validate(report: &str) -> Result<(), String> {
    let mut saw_header = false;
    let mut saw_summary = false;
    for (i, raw) in report.lines().enumerate() {
        let n = i + 1;
        let line: Value = serde_json::from_str(raw).map_err(|e| format!("line {n}: {e}"))?;
        let ty = line.get("type").and_then(Value::as_str).ok_or(format!("line {n}: no type"))?;
        if i == 0 && ty != "header" {
            return Err("first line is not a header".into());
        }
        if saw_summary {
            return Err(format!("line {n}: content after summary"));
        }
        match ty {
            "header" => {
                if saw_header {
                    return Err(format!("line {n}: second header"));
                }
                saw_header = true;
                require(&line, n, &["report", "tool", "version", "unix_time", "timings_ms"])?;
            }
            "config" => require(&line, n, &["seed", "rng", "config"])?,
            "analysis" => {
                require(&line, n, &["index", "name", "op", "status", "verdict", "semantics", "detail", "result"])?;
                let ok = line["status"] == "ok";
                if ok && line["semantics"].as_str().is_none_or(str::is_empty) {
                    return Err(format!("line {n}: verdict without semantics"));
                }
            }
            "criterion" => require(&line, n, &["id", "name", "pass", "detail"])?,
            "summary" => {
                saw_summary = true;
            }
            other => return Err(format!("line {n}: unknown type '{other}'")),
        }
    }
    if !saw_summary {
        return Err("no summary line".into());
    }
    Ok(())
}
