//! Acceptance checks. Runs without the libtest harness and prints one
//! `PASS` or `FAIL` line per criterion; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use k3lat::e8::{self, orbits_of_norm, HIGHEST_ROOT};
use k3lat::enumerate::root_count;
use k3lat::expr::parse;
use k3lat::glue::{
    coset_count_row, coset_count_row_via_dual, coset_counts_by_e8, hyperplane_multiplicity,
    nikulin_embeddable, nikulin_minus2_property, polarized_transcendental, restricted_weight,
};
use k3lat::report::{table_rows, REFERENCE_TABLE};
use k3lat::sbad::{is_sbad_extension, possible_extension_norms, ExtensionWitness};
use k3lat::Lattice;
use num_bigint::BigInt;
use num_rational::BigRational;

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_reproduction() -> Check {
    let rows = table_rows(2, 14).map_err(|e| e.to_string())?;
    let mut problems = Vec::new();
    if rows.len() != REFERENCE_TABLE.len() {
        problems.push(format!("{} rows, expected {}", rows.len(), REFERENCE_TABLE.len()));
    }
    for (i, &(two_n, roots, columns)) in REFERENCE_TABLE.iter().enumerate() {
        if rows.iter().any(|r| r.reference_row == Some(i)) {
            continue;
        }
        match rows.iter().find(|r| r.two_n == two_n && r.roots == roots) {
            Some(r) => {
                let diffs: Vec<String> = columns
                    .iter()
                    .zip(&r.columns)
                    .enumerate()
                    .filter(|(_, (a, b))| a != b)
                    .map(|(k, (a, b))| format!("k={k}: computed {b}, expected {a}"))
                    .collect();
                problems.push(format!("row 2n={two_n} roots={roots}: {}", diffs.join("; ")));
            }
            None => problems.push(format!("row 2n={two_n} roots={roots} missing")),
        }
    }
    let flagged: Vec<(i64, u64)> = rows
        .iter()
        .filter(|r| !r.primitive)
        .map(|r| (r.two_n, r.roots))
        .collect();
    if flagged != [(8, 126)] || rows.iter().any(|r| r.primitive != r.caveat.is_none()) {
        problems.push(format!("non-primitive rows {flagged:?}, expected [(8, 126)]"));
    }
    ensure(problems.is_empty(), || problems.join(" | "))
}

fn weight() -> Check {
    let u = e8::complement_of(&HIGHEST_ROOT).map_err(|e| e.to_string())?;
    let w = restricted_weight(&u).map_err(|e| e.to_string())?;
    ensure(w == 75, || format!("weight {w}, expected 75"))
}

fn multiplicities() -> Check {
    let orbit = orbits_of_norm(2).map_err(|e| e.to_string())?.remove(0);
    let row = coset_count_row(&orbit).map_err(|e| e.to_string())?;
    let e1 = hyperplane_multiplicity(&row, 0, &rat(-2, 1)).map_err(|e| e.to_string())?;
    let e2 = hyperplane_multiplicity(&row, 1, &rat(-1, 2)).map_err(|e| e.to_string())?;
    ensure(e1.total_multiplicity == 1 && e2.total_multiplicity == 57, || {
        format!(
            "multiplicities {} and {}, expected 1 and 57",
            e1.total_multiplicity, e2.total_multiplicity
        )
    })
}

fn degree_eight_extension() -> Check {
    let w = ExtensionWitness::new(Lattice::rank1(8), vec![BigInt::from(4)], BigInt::from(0))
        .map_err(|e| e.to_string())?;
    let v = is_sbad_extension(&w).map_err(|e| e.to_string())?;
    ensure(v.det_s1 == BigInt::from(-16) && v.sbad && v.det_s == BigInt::from(8), || {
        format!("det {} sbad {}", v.det_s1, v.sbad)
    })
}

fn embedding() -> Check {
    for two_n in (2..=14).step_by(2) {
        let r = nikulin_embeddable(&polarized_transcendental(two_n)).map_err(|e| e.to_string())?;
        if !r.embeddable {
            return Err(format!("2n={two_n} reported not embeddable"));
        }
    }
    let synthetic = parse(&format!("H + H{}", " + (-2)".repeat(24)))
        .map_err(|e| e.to_string())?
        .evaluate()
        .map_err(|e| e.to_string())?;
    let r = nikulin_embeddable(&synthetic).map_err(|e| e.to_string())?;
    ensure(r.rank == 28 && !r.embeddable, || "rank-28 lattice reported embeddable".into())
}

fn minus_two_property() -> Check {
    let cases = [
        ("II(1,1)", true),
        ("II(1,9)", true),
        ("II(1,17)", true),
        ("(2)", true),
        ("(2) + -E8", true),
        ("(2) + -E8 + -E8", true),
        ("(4)", false),
        ("(6)", false),
        ("(2) + -E7", false),
    ];
    let mut wrong = Vec::new();
    for (text, expected) in cases {
        let l = parse(text)
            .map_err(|e| e.to_string())?
            .evaluate()
            .map_err(|e| e.to_string())?;
        let got = nikulin_minus2_property(&l).map_err(|e| e.to_string())?;
        if got != expected {
            wrong.push(format!("{text}: {got}"));
        }
    }
    ensure(wrong.is_empty(), || wrong.join(", "))
}

fn oracle_equivalence() -> Check {
    for two_n in (2..=14).step_by(2) {
        for orbit in orbits_of_norm(two_n).map_err(|e| e.to_string())? {
            let primary = coset_count_row(&orbit).map_err(|e| e.to_string())?;
            let oracle = coset_count_row_via_dual(&orbit).map_err(|e| e.to_string())?;
            if primary.counts != oracle.counts {
                return Err(format!("2n={two_n} rep={:?}: methods disagree", orbit.representative));
            }
            let labels: Vec<i64> = (0..=two_n).collect();
            let counts = coset_counts_by_e8(&orbit.representative, &labels).map_err(|e| e.to_string())?;
            for k in 0..=two_n {
                if counts[&k] != counts[&(two_n - k)] {
                    return Err(format!("2n={two_n} k={k}: k and 2n-k differ"));
                }
            }
        }
    }
    Ok(())
}

fn enumeration_ground_truth() -> Check {
    let e8_roots = root_count(&Lattice::e8()).map_err(|e| e.to_string())?;
    let e7_roots = root_count(&Lattice::e7()).map_err(|e| e.to_string())?;
    if (e8_roots, e7_roots) != (240, 126) {
        return Err(format!("root counts {e8_roots}, {e7_roots}"));
    }
    let rows = table_rows(2, 14).map_err(|e| e.to_string())?;
    for r in &rows {
        let k0 = &r.cells.counts[&0].counts;
        if r.columns[0] != 1 || *k0 != BTreeMap::from([(rat(0, 1), 1)]) {
            return Err(format!("2n={} roots={}: k=0 column is {}", r.two_n, r.roots, r.columns[0]));
        }
    }
    Ok(())
}

fn extension_norms_for_small_degrees() -> Check {
    let rows = table_rows(4, 10).map_err(|e| e.to_string())?;
    let mut bad = Vec::new();
    for r in &rows {
        for (k, &total) in r.columns.iter().enumerate().skip(1) {
            if total == 0 {
                continue;
            }
            let norms = possible_extension_norms(r.two_n, k as i64).map_err(|e| e.to_string())?;
            if norms != [0] {
                bad.push(format!(
                    "2n={} roots={} k={k} (count {total}): norms {norms:?}",
                    r.two_n, r.roots
                ));
            }
        }
    }
    ensure(bad.is_empty(), || bad.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 table reproduction for 2n = 2..14", table_reproduction),
        ("2 restricted weight of the 2n=2 complement is 75", weight),
        ("3 hyperplane multiplicities 1 and 57 at 2n=2", multiplicities),
        ("4 gram [[8,4],[4,0]] has det -16 and is S-bad", degree_eight_extension),
        ("5 embedding check for 2n = 2..14 and the rank-28 case", embedding),
        ("6 minus-two property on the test set", minus_two_property),
        ("7 E8 bucketing equals dual-coset enumeration, k <-> 2n-k symmetry", oracle_equivalence),
        ("8 root counts 240 and 126, k=0 column all ones", enumeration_ground_truth),
        ("9 extension norms {0} for nonzero cells at 2n = 4..10", extension_norms_for_small_degrees),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(()) => println!("PASS  criterion {name}"),
            Err(why) => {
                failures += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
