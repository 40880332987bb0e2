//! WebAssembly entry points for the demo page. Each export returns a JSON
//! string (schema 1); the plain `*_json` functions carry the same logic for
//! native callers and tests.

use k3lat::e8;
use k3lat::enumerate::root_count;
use k3lat::expr;
use k3lat::glue::{
    class_lines, coset_count_row, divisor_classes, hyperplane_multiplicity, nikulin_embeddable,
    nikulin_minus2_property, restricted_weight,
};
use k3lat::report::{rational_string, table_row, SCHEMA};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn int_json(v: &BigInt) -> Value {
    v.to_i64().map(Value::from).unwrap_or_else(|| Value::from(v.to_string()))
}

fn render(v: Value) -> String {
    serde_json::to_string(&v).expect("json value serializes")
}

/// Every E8 orbit of norm `two_n` with its coset counts, bucketed by label
/// and by the (negative) norm of the dual vectors.
pub fn orbit_table_json(two_n: i64) -> Result<String, String> {
    let orbits = e8::orbits_of_norm(two_n).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for (i, o) in orbits.iter().enumerate() {
        let row = table_row(o).map_err(|e| e.to_string())?;
        let cells: Vec<Value> = row
            .cells
            .counts
            .iter()
            .map(|(k, hist)| {
                let buckets: Vec<Value> = hist
                    .counts
                    .iter()
                    .map(|(norm, count)| json!({ "norm": rational_string(&-norm.clone()), "count": count }))
                    .collect();
                json!({ "k": k, "total": hist.total(), "buckets": buckets })
            })
            .collect();
        rows.push(json!({
            "index": i + 1,
            "representative": row.representative,
            "primitive": row.primitive,
            "orbit_size": row.orbit_size,
            "roots": row.roots,
            "weight": restricted_weight(&o.complement).map_err(|e| e.to_string())?,
            "columns": row.columns,
            "matches_reference": row.reference_row.is_some(),
            "caveat": row.caveat,
            "cells": cells,
        }));
    }
    Ok(render(json!({ "schema": SCHEMA, "two_n": two_n, "rows": rows })))
}

/// Divisor classes and hyperplane multiplicities of orbit `orbit` (1-based)
/// of norm `two_n`.
pub fn divisors_json(two_n: i64, orbit: usize) -> Result<String, String> {
    let orbits = e8::orbits_of_norm(two_n).map_err(|e| e.to_string())?;
    let o = orbit
        .checked_sub(1)
        .and_then(|i| orbits.get(i))
        .ok_or_else(|| format!("orbit {orbit} out of range: norm {two_n} has {} orbit(s)", orbits.len()))?;
    let row = coset_count_row(o).map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for (k, norm) in class_lines(&row) {
        reports.push(hyperplane_multiplicity(&row, k, &norm).map_err(|e| e.to_string())?);
    }
    Ok(render(json!({
        "schema": SCHEMA,
        "two_n": two_n,
        "orbit": orbit,
        "classes": divisor_classes(&row),
        "multiplicities": reports,
    })))
}

/// Invariants of a lattice expression such as `(-2) + -E8 + -E8 + H + H`.
/// `gram:` terms are rejected since the page has no filesystem.
pub fn lattice_info_json(spec: &str) -> Result<String, String> {
    let parsed = expr::parse(spec).map_err(|e| e.to_string())?;
    let l = parsed
        .evaluate_with(|path| Err(k3lat::LatticeError::InvalidArgument(format!("cannot read {path} here")).into()))
        .map_err(|e| e.to_string())?;
    let (pos, neg) = l.signature().map_err(|e| e.to_string())?;
    let disc = l.discriminant_group().map_err(|e| e.to_string())?;
    let divisors: Vec<Value> = disc
        .divisors
        .iter()
        .filter(|d| **d > BigInt::from(1))
        .map(int_json)
        .collect();
    let roots = if pos == 0 || neg == 0 {
        Some(root_count(&l).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let embeddable = if pos == 2 {
        Some(nikulin_embeddable(&l).map_err(|e| e.to_string())?.embeddable)
    } else {
        None
    };
    let minus2 = if pos == 1 {
        Some(nikulin_minus2_property(&l).map_err(|e| e.to_string())?)
    } else {
        None
    };
    Ok(render(json!({
        "schema": SCHEMA,
        "lattice": parsed.to_string(),
        "warnings": parsed.warnings(),
        "rank": l.rank(),
        "signature": [pos, neg],
        "determinant": int_json(&l.determinant()),
        "even": l.is_even(),
        "discriminant_divisors": divisors,
        "roots": roots,
        "embeddable": embeddable,
        "minus2_property": minus2,
    })))
}

#[wasm_bindgen(js_name = orbitTable)]
pub fn orbit_table(two_n: i32) -> Result<String, JsError> {
    orbit_table_json(two_n.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = divisors)]
pub fn divisors(two_n: i32, orbit: u32) -> Result<String, JsError> {
    divisors_json(two_n.into(), orbit as usize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = latticeInfo)]
pub fn lattice_info(spec: &str) -> Result<String, JsError> {
    lattice_info_json(spec).map_err(|e| JsError::new(&e))
}
