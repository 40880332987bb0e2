use k3lat_web::{divisors_json, lattice_info_json, orbit_table_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn norm_two_table() {
    let v = parse(orbit_table_json(2).unwrap());
    assert_eq!(v["schema"], 1);
    let row = &v["rows"][0];
    assert_eq!(row["roots"], 126);
    assert_eq!(row["weight"], 75);
    assert_eq!(row["columns"], serde_json::json!([1, 56]));
    assert_eq!(row["cells"][1]["buckets"][0]["norm"], "-3/2");
    assert_eq!(row["cells"][1]["buckets"][0]["count"], 56);
    assert_eq!(row["matches_reference"], true);
}

#[test]
fn non_primitive_row_carries_caveat() {
    let v = parse(orbit_table_json(8).unwrap());
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["primitive"], false);
    assert!(rows[0]["caveat"].is_string());
    assert!(rows[1]["caveat"].is_null());
    assert!(orbit_table_json(7).is_err());
}

#[test]
fn multiplicities_at_norm_two() {
    let v = parse(divisors_json(2, 1).unwrap());
    let totals: Vec<u64> = v["multiplicities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["total_multiplicity"].as_u64().unwrap())
        .collect();
    assert_eq!(totals, [1, 57]);
    assert_eq!(v["classes"][0]["count"], 56);
    assert!(divisors_json(2, 2).is_err());
    assert!(divisors_json(2, 0).is_err());
}

#[test]
fn lattice_info() {
    let v = parse(lattice_info_json("(-2) + -E8 + -E8 + H + H").unwrap());
    assert_eq!(v["signature"], serde_json::json!([2, 19]));
    assert_eq!(v["embeddable"], true);
    assert!(v["roots"].is_null());
    let v = parse(lattice_info_json("II(1,9)").unwrap());
    assert_eq!(v["minus2_property"], true);
    let v = parse(lattice_info_json("-E7").unwrap());
    assert_eq!(v["roots"], 126);
    assert_eq!(v["discriminant_divisors"], serde_json::json!([2]));
    assert!(lattice_info_json("gram:x.txt").is_err());
    assert!(lattice_info_json("E9").is_err());
}
