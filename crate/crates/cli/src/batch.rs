use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::args::BatchArgs;
use crate::{exit, manifest, table, Failure, Response};

struct Cell {
    experiment: String,
    command: Vec<String>,
    params: Map<String, Value>,
}

fn expand_values(key: &str, v: &Value) -> Result<Vec<Value>, Failure> {
    match v {
        Value::Array(vs) => Ok(vs.clone()),
        Value::Object(o) => {
            let bound = |k: &str| {
                o.get(k)
                    .and_then(Value::as_i64)
                    .ok_or_else(|| Failure::usage(format!("grid `{key}`: `{k}` must be an integer")))
            };
            Ok((bound("from")?..=bound("to")?).map(Value::from).collect())
        }
        other => Ok(vec![other.clone()]),
    }
}

fn cells_of(index: usize, exp: &Value) -> Result<Vec<Cell>, Failure> {
    let name = exp
        .get("name")
        .and_then(Value::as_str)
        .map_or_else(|| format!("experiment-{index}"), str::to_string);
    let command: Vec<String> = exp
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| Failure::usage(format!("{name}: missing `command`")))?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    if command.is_empty() || command[0] == "batch" {
        return Err(Failure::usage(format!("{name}: cells must run a non-batch command")));
    }
    let empty = Map::new();
    let fixed = match exp.get("fixed") {
        Some(Value::Object(o)) => o,
        None => &empty,
        Some(_) => return Err(Failure::usage(format!("{name}: `fixed` must be an object"))),
    };
    let grid = match exp.get("grid") {
        Some(Value::Object(o)) => o,
        None => &empty,
        Some(_) => return Err(Failure::usage(format!("{name}: `grid` must be an object"))),
    };
    let mut combos = vec![fixed.clone()];
    for (key, values) in grid {
        let values = expand_values(key, values)?;
        combos = combos
            .into_iter()
            .flat_map(|base| {
                values.iter().map(move |v| {
                    let mut m = base.clone();
                    m.insert(key.clone(), v.clone());
                    m
                })
            })
            .collect();
    }
    Ok(combos
        .into_iter()
        .map(|params| Cell {
            experiment: name.clone(),
            command: command.clone(),
            params,
        })
        .collect())
}

fn argv(cell: &Cell) -> Vec<String> {
    let mut out = vec!["mingens".to_string()];
    out.extend(cell.command.iter().cloned());
    out.push("--json".into());
    for (key, v) in &cell.params {
        let flag = format!("--{key}");
        match v {
            Value::Bool(true) => out.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => out.extend([flag, s.clone()]),
            Value::Array(vs) => {
                for x in vs {
                    out.push(flag.clone());
                    out.push(x.as_str().map_or_else(|| x.to_string(), str::to_string));
                }
            }
            other => out.extend([flag, other.to_string()]),
        }
    }
    out
}

fn compact(v: &Value) -> String {
    match v {
        Value::Object(o) => o
            .iter()
            .map(|(k, v)| format!("{k}={}", v.as_str().map_or_else(|| v.to_string(), str::to_string)))
            .collect::<Vec<_>>()
            .join(" "),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub(crate) fn run_batch(a: BatchArgs) -> Result<Response, Failure> {
    let text = std::fs::read_to_string(&a.spec).map_err(|e| Failure::usage(format!("{}: {e}", a.spec.display())))?;
    let spec: Value = if text.trim().is_empty() {
        json!({"experiments": []})
    } else {
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", a.spec.display())))?
    };
    let experiments = match spec.get("experiments") {
        Some(Value::Array(es)) => es.clone(),
        None => Vec::new(),
        Some(_) => return Err(Failure::usage("`experiments` must be an array")),
    };
    let mut cells = Vec::new();
    for (i, exp) in experiments.iter().enumerate() {
        cells.extend(cells_of(i, exp)?);
    }
    let rows: Vec<Value> = cells
        .par_iter()
        .enumerate()
        .map(|(i, cell)| {
            let start = Instant::now();
            let out = crate::run(argv(cell), false);
            let millis = start.elapsed().as_millis() as u64;
            let outcome = out.json().pointer("/manifest/outcome").cloned().unwrap_or(Value::Null);
            let error = out.stderr.trim();
            let mut row = json!({
                "cell": i,
                "experiment": cell.experiment,
                "params": cell.params,
                "exit_code": out.code,
                "outcome": outcome,
                "error": if error.is_empty() { Value::Null } else { json!(error) },
            });
            if a.timings {
                row["millis"] = json!(millis);
            }
            row
        })
        .collect();
    let mut codes: BTreeMap<String, u64> = BTreeMap::new();
    for r in &rows {
        *codes.entry(r["exit_code"].to_string()).or_default() += 1;
    }
    let mut header = vec!["cell", "experiment", "params", "exit", "outcome"];
    if a.timings {
        header.push("ms");
    }
    let cells_text: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut c = vec![
                r["cell"].to_string(),
                r["experiment"].as_str().unwrap_or_default().to_string(),
                compact(&r["params"]),
                r["exit_code"].to_string(),
                compact(&r["outcome"]),
            ];
            if a.timings {
                c.push(r["millis"].to_string());
            }
            c
        })
        .collect();
    let outcome = json!({"cells": rows.len(), "exit_codes": codes});
    let body = json!({
        "manifest": manifest("batch", serde_json::to_value(&a).expect("serializable"), None, None, outcome),
        "rows": rows,
    });
    Ok(Response {
        body,
        code: exit::OK,
        table: Some(table::render(&header, &cells_text)),
    })
}
