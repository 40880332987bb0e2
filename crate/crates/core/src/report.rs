//! Table assembly and the text formats shared by the CLI and the web demo.
//!
//! JSON carries `"schema": 1`. Integers are JSON numbers when they fit in an
//! `i64`; rationals are always strings `"p/q"` in lowest terms (`"p"` when
//! integral).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::e8::{orbits_of_norm, E8Vector, OrbitClass};
use crate::error::{LatticeError, Result};
use crate::glue::{coset_count_row, CosetCountTable};

pub const SCHEMA: u32 = 1;

/// Widest row of the published table: labels `k = 0..=7`.
pub const MAX_LABEL_COLUMNS: usize = 8;

/// Rows `(2n, roots, column totals)` of the published coset-count table, in
/// published order.
pub const REFERENCE_TABLE: [(i64, u64, &[u64]); 9] = [
    (2, 126, &[1, 56]),
    (4, 84, &[1, 64, 14]),
    (6, 74, &[1, 54, 27, 2]),
    (8, 126, &[1, 0, 56, 0, 1]),
    (8, 56, &[1, 56, 28, 8, 0]),
    (10, 60, &[1, 44, 33, 12, 1, 0]),
    (12, 46, &[1, 48, 30, 16, 3, 48, 10]),
    (14, 44, &[1, 42, 35, 14, 7, 0, 21, 2]),
    (14, 72, &[1, 28, 27, 27, 1, 1, 27, 0]),
];

pub const NON_PRIMITIVE_CAVEAT: &str =
    "non-primitive vector: does not correspond to a primitive embedding of T into II(2,26)";

pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

pub fn ser_rational_vec<S: Serializer>(
    v: &crate::lattice::RationalVector,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<String> = v.coords.iter().map(rational_string).collect();
    strings.serialize(s)
}

pub fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

/// Flip a positive-convention norm to the negative-definite convention unless
/// internal norms were requested.
pub fn present_norm(internal: &BigRational, internal_norms: bool) -> BigRational {
    if internal_norms {
        internal.clone()
    } else {
        -internal.clone()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub two_n: i64,
    pub roots: u64,
    pub primitive: bool,
    pub representative: E8Vector,
    pub orbit_size: u64,
    /// Column totals for `k = 0..=n`.
    pub columns: Vec<u64>,
    /// Index into [`REFERENCE_TABLE`] of the published row with the same
    /// content, if any.
    pub reference_row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<&'static str>,
    #[serde(skip)]
    pub cells: CosetCountTable,
}

pub fn reference_row_index(two_n: i64, roots: u64, columns: &[u64]) -> Option<usize> {
    REFERENCE_TABLE
        .iter()
        .position(|&(t, r, c)| t == two_n && r == roots && c == columns)
}

pub fn table_row(orbit: &OrbitClass) -> Result<TableRow> {
    let cells = coset_count_row(orbit)?;
    let columns = cells.column_totals();
    Ok(TableRow {
        two_n: orbit.two_n,
        roots: orbit.root_count,
        primitive: orbit.primitive,
        representative: orbit.representative,
        orbit_size: orbit.orbit_size,
        reference_row: reference_row_index(orbit.two_n, orbit.root_count, &columns),
        columns,
        caveat: (!orbit.primitive).then_some(NON_PRIMITIVE_CAVEAT),
        cells,
    })
}

/// One row per E8 orbit of norm `2n`, for every even `2n` in `from..=to`;
/// ascending `2n`, then lexicographic representative.
pub fn table_rows(from: i64, to: i64) -> Result<Vec<TableRow>> {
    if from <= 0 || to < from {
        return Err(LatticeError::InvalidArgument(format!(
            "bad norm range {from}..={to}"
        )));
    }
    let first = if from % 2 == 0 { from } else { from + 1 };
    let norms: Vec<i64> = (first..=to).step_by(2).collect();
    let mut rows = Vec::new();
    for two_n in norms {
        let orbits = orbits_of_norm(two_n)?;
        #[cfg(feature = "parallel")]
        let built: Vec<Result<TableRow>> = {
            use rayon::prelude::*;
            orbits.par_iter().map(table_row).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let built: Vec<Result<TableRow>> = orbits.iter().map(table_row).collect();
        for r in built {
            rows.push(r?);
        }
    }
    Ok(rows)
}

fn header_cells() -> Vec<String> {
    let mut h = vec!["2n".to_string(), "roots".to_string()];
    h.extend((0..MAX_LABEL_COLUMNS).map(|k| format!("k={k}")));
    h
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = header_cells().join(",");
    out.push('\n');
    for r in rows {
        let mut cells = vec![r.two_n.to_string(), r.roots.to_string()];
        cells.extend(r.columns.iter().map(u64::to_string));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn table_markdown(rows: &[TableRow]) -> String {
    let header = header_cells();
    let mut out = format!("| {} |\n", header.join(" | "));
    out.push_str(&format!("|{}\n", "---:|".repeat(header.len())));
    let mut notes = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut cells = vec![r.two_n.to_string(), r.roots.to_string()];
        cells.extend(r.columns.iter().map(u64::to_string));
        cells.resize(header.len(), String::new());
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
        if !r.primitive {
            notes.push(format!(
                "Row {} (2n={}, {} roots): {}.",
                i + 1,
                r.two_n,
                r.roots,
                NON_PRIMITIVE_CAVEAT
            ));
        }
    }
    if !notes.is_empty() {
        out.push('\n');
        for n in notes {
            out.push_str(&n);
            out.push('\n');
        }
    }
    out
}

#[derive(Serialize)]
struct TableJson<'a> {
    schema: u32,
    rows: &'a [TableRow],
}

pub fn table_json(rows: &[TableRow]) -> String {
    serde_json::to_string_pretty(&TableJson {
        schema: SCHEMA,
        rows,
    })
    .expect("table serializes")
}
