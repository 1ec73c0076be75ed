use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srimcount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn dtable_reproduces_the_worked_examples() {
    let v = json(&["dtable", "--check-paper"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let ds: Vec<u64> = rows.iter().map(|r| r["D"].as_u64().unwrap()).collect();
    assert_eq!(ds, [34, 98, 42, 258, 642, 1538, 204, 852, 3282]);
    assert!(rows.iter().all(|r| r["expected"]["match"] == true));
}

#[test]
fn dtable_single_rows() {
    let v = json(&["--q", "2", "dtable", "--ell", "5"]);
    assert_eq!(v["dvec"], serde_json::json!([2, 4, 8, 16]));
    assert_eq!(v["D"], 98);
    assert!(v["ratio_value"].as_f64().unwrap() < 3.2);

    let v = json(&["--q", "3", "dtable", "--ell", "6", "--check-paper"]);
    assert_eq!(v["D"], 3282);
    assert!(v["ratio_value"].as_f64().unwrap() < 4.51);
    assert_eq!(v["orders"], serde_json::json!([9, 9, 3, 3]));

    assert_eq!(json(&["--q", "2", "dtable", "--ell", "7"])["D"], 642);
}

#[test]
fn group_orders_for_l8() {
    let v = json(&["--q", "2", "group", "--ell", "8"]);
    assert_eq!(v["orders"], serde_json::json!([16, 4, 2, 2]));
    assert_eq!(v["size"], 256);
}

#[test]
fn extension_degree_flag_matches_the_order() {
    let a = run(&["--q", "4", "group", "--ell", "2", "--t", "1"]);
    let b = run(&["--q", "2", "--ext-degree", "2", "group", "--ell", "2", "--t", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run(&["--q", "8", "--ext-degree", "2", "group"]).status.code(), Some(2));
}

#[test]
fn verify_weil_checks_fifteen_polynomials() {
    let v = json(&["--q", "2", "verify", "--suite", "weil", "--ell", "4", "--t", "0"]);
    assert_eq!(v["checks"], 15);
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_examples_suite() {
    let v = json(&["verify", "--suite", "examples"]);
    assert_eq!(v["checks"], 9);
    assert_eq!(v["failed"], 0);
}

#[test]
fn count_both_methods_agree() {
    let v = json(&[
        "--q",
        "3",
        "count",
        "irreducible",
        "--d",
        "1..4",
        "--ell",
        "1",
        "--t",
        "1",
        "--method",
        "both",
    ]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4 * 6);
    assert!(rows.iter().all(|r| r["agree"] == true));

    let v = json(&[
        "--q",
        "2",
        "count",
        "srim",
        "--half-degree",
        "3",
        "--leading",
        "1",
        "--method",
        "both",
    ]);
    assert_eq!(v["value"], v["oracle_value"]);
    assert_eq!(v["params"]["eps"], "a=(1)");
}

#[test]
fn count_takes_windows_or_a_class() {
    let a = json(&[
        "--q",
        "5",
        "count",
        "irreducible",
        "--d",
        "3",
        "--leading",
        "2",
        "--ending",
        "3",
        "--no-timing",
    ]);
    let b = json(&[
        "--q",
        "5",
        "count",
        "irreducible",
        "--d",
        "3",
        "--epsilon",
        "a=(2);b=(3)",
        "--ell",
        "1",
        "--t",
        "1",
        "--no-timing",
    ]);
    assert_eq!(a, b);
    // (q^d - 1) / (d |E|) with |E| = 5 * 4
    assert_eq!(a["main_term"], "31/15");
}

#[test]
fn json_is_deterministic() {
    let args = [
        "--q",
        "3",
        "count",
        "irreducible",
        "--d",
        "5",
        "--ell",
        "2",
        "--no-timing",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = [
        "--q",
        "2",
        "bounds",
        "--d",
        "8",
        "--ell",
        "2",
        "--t",
        "1",
        "--with-exact",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = [
        "--q",
        "2",
        "oracle",
        "srim",
        "--d",
        "5",
        "--ell",
        "1",
        "--witnesses",
        "--no-timing",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn timing_is_reported_unless_disabled() {
    let v = json(&[
        "--q",
        "2",
        "oracle",
        "irreducible",
        "--d",
        "4",
        "--ell",
        "1",
        "--leading",
        "1",
    ]);
    assert!(v["elapsed_ms"].is_number());
    assert_eq!(v["count"], 2);
    let v = json(&[
        "--q",
        "2",
        "oracle",
        "irreducible",
        "--d",
        "4",
        "--ell",
        "1",
        "--leading",
        "1",
        "--no-timing",
    ]);
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn oracle_witnesses() {
    let v = json(&[
        "--q",
        "2",
        "oracle",
        "irreducible",
        "--d",
        "4",
        "--ell",
        "1",
        "--leading",
        "1",
        "--witnesses",
    ]);
    let w: Vec<&str> = v["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(w, ["x^4+x^3+1", "x^4+x^3+x^2+x+1"]);
    let v = json(&["--q", "3", "oracle", "F", "--d", "2"]);
    assert_eq!(v["count"], 9);
}

#[test]
fn bounds_csv_grid() {
    let out = run(&[
        "--q",
        "3",
        "bounds",
        "--d",
        "1..6",
        "--ell",
        "1",
        "--with-exact",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "q,d,ell,t,eps,thm1_upper,thm1_lower,hsu_upper,cohen_lower,thm2_upper,thm2_lower,exists,exact_irreducible,exact_srim,improvement"
    );
    assert_eq!(lines.count(), 6 * 3);
}

#[test]
fn bounds_single_point_verdicts() {
    let v = json(&["--q", "2", "bounds", "--d", "4", "--epsilon", "a=(1)", "--with-exact"]);
    assert_eq!(v["exact_irreducible"], 2);
    assert_eq!(v["thm1_upper"]["exact"], "2");
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["holds"] == true));
}

#[test]
fn ptable_lists_every_class() {
    let v = json(&["--q", "2", "ptable", "--ell", "4"]);
    assert_eq!(v["classes"].as_array().unwrap().len(), 16);
    assert_eq!(v["summary"]["D"], 34);
    let out = run(&["--q", "2", "ptable", "--ell", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("eps,deg,coeffs\n"));
    assert!(text.lines().last().unwrap().starts_with("summary,"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--q", "6", "group"]).status.code(), Some(2));
    assert_eq!(run(&["group"]).status.code(), Some(2));
    assert_eq!(
        run(&["--q", "2", "dtable", "--ell", "3", "--check-paper"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["--q", "2", "count", "srim", "--d", "3", "--t", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--q", "2", "frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["--q", "2", "oracle", "irreducible", "--d", "20", "--budget", "1000"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        run(&["--q", "2", "bounds", "--d", "2", "--ell", "1", "--budget", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn pretty_output_is_text() {
    let out = run(&["--q", "2", "group", "--ell", "3", "--format", "pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("orders: (4,2)"), "{text}");
}
