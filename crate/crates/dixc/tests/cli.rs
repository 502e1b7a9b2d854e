use std::io::Write;
use std::process::{Command, Output};

fn dixc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dixc"))
        .args(args)
        .env_remove("DIXC_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = dixc(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    file
}

#[test]
fn separate_coding_on_the_cycle() {
    let v = json(&["bound", "-p", "(1|3);(2|1);(3|2)", "-s", "cc-separate", "--weights", "1,1,1"]);
    assert_eq!(v["value"], "15/2");
    assert_eq!(v["grouping"].as_array().unwrap().len(), 7);
}

#[test]
fn trivial_problem() {
    let v = json(&["bound", "-p", "(1)", "-s", "mais", "--weights", "1"]);
    assert_eq!(v["value"], "1");
}

#[test]
fn four_receiver_polymatroid_sum() {
    let v = json(&["bound", "-p", "(1|4);(2|3,4);(3|1,2);(4|2,3)", "-s", "polymatroid", "--weights", "1,1,1,1"]);
    assert_eq!(v["value"], "24");
}

#[test]
fn preset_grouping_reaches_the_outer_bound() {
    let v = json(&[
        "bound", "-p", "(1|4);(2|3,4);(3|1,2);(4|2,3)", "-s", "cc-grouped",
        "--grouping", "preset:table3", "--weights", "1,1,1,1",
    ]);
    assert_eq!(v["value"], "24");
}

#[test]
fn custom_cut_region_and_note() {
    let v = json(&["bound", "-p", "(1);(2|3);(3|2)", "-s", "polymatroid+custom", "--region"]);
    let rows = v["region"]["cons"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["origin"] == "custom:appendixB"));
    assert!(v["notes"].as_array().unwrap().is_empty());

    let v = json(&[
        "bound", "-p", "(1);(2|3);(3|2)", "--cap", "1,2,3=2", "-s", "polymatroid+custom", "--weights", "1,1,1",
    ]);
    assert_eq!(v["notes"].as_array().unwrap().len(), 1);
}

#[test]
fn capacity_overrides_scale_values() {
    let v = json(&["bound", "-p", "(1);(2)", "--cap", "1=1/2", "-s", "cc-joint", "--weights", "1,0"]);
    assert_eq!(v["value"], "3/2");
}

#[test]
fn problem_file_and_decoding_file() {
    let problem = temp_json(r#"{"n": 3, "side_info": {"1": [], "2": [3], "3": [2]}}"#);
    let decoding = temp_json(r#"{"1": [1], "2": [1, 2], "3": [1, 3]}"#);
    let v = json(&[
        "bound", "--problem-file", problem.path().to_str().unwrap(), "-s", "cc-joint",
        "--decoding", decoding.path().to_str().unwrap(), "--weights", "1,1,1",
    ]);
    assert_eq!(v["problem"], "(1);(2|3);(3|2)");
    assert_eq!(v["value"], "9");
}

#[test]
fn table2_rule_region() {
    let v = json(&["bound", "-p", "(1);(2|3);(3|2)", "-s", "cc-joint", "--decoding", "rule:table2", "--region"]);
    let rhs: Vec<&str> = v["region"]["cons"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["rhs"].as_str().unwrap())
        .collect();
    assert!(rhs.contains(&"9"));
}

#[test]
fn grouping_search() {
    let v = json(&["bound", "-p", "(1);(2|3);(3|2)", "-s", "cc-grouped", "--search-groupings", "--weights", "1,1,1"]);
    assert_eq!(v["value"], "9");
}

#[test]
fn csv_and_text_formats() {
    let out = dixc(&["bound", "-p", "(1|3);(2|1);(3|2)", "-s", "cc-separate", "--weights", "1,1,1", "--format", "csv"]);
    assert_eq!(stdout(&out), "scheme,problem,direction,value\ncc-separate,(1|3);(2|1);(3|2),\"1,1,1\",15/2\n");
    let out = dixc(&["bound", "-p", "(1|3);(2|1);(3|2)", "-s", "cc-separate", "--weights", "1,1,1"]);
    assert!(stdout(&out).contains("15/2 (7.5)"));
    let out = dixc(&["bound", "-p", "(1);(2|3);(3|2)", "-s", "mais", "--region"]);
    assert!(stdout(&out).contains("R_1 >= 0"));
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        &["bound", "-p", "(1)", "-s", "nonsense", "--weights", "1"][..],
        &["bound", "-p", "(1)(2)", "-s", "mais", "--weights", "1"],
        &["bound", "-p", "(1);(2)", "-s", "mais", "--weights", "1"],
        &["bound", "-p", "(1);(2)", "-s", "mais", "--weights", "1,-1"],
        &["bound", "-p", "(1);(2)", "-s", "cc-grouped", "--weights", "1,1"],
        &["bound", "-p", "(1);(2)", "-s", "mais", "--weights", "1,1", "--region"],
        &["bound", "--problem-file", "/nonexistent/problem.json", "-s", "mais", "--region"],
        &["repro", "table9"],
        &["frobnicate"],
    ] {
        let out = dixc(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(dixc(&["--help"]).status.code(), Some(0));
    assert_eq!(dixc(&["--version"]).status.code(), Some(0));
}

#[test]
fn exhausted_budget_exits_with_two() {
    let out = dixc(&["bound", "-p", "(1|3);(2|1);(3|2)", "-s", "cc-joint", "--weights", "1,1,1", "--search-budget", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dixc(&["enumerate", "-n", "3", "--with-regions", "--search-budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repro_passes_and_is_deterministic() {
    let args = ["repro", "table1", "eq9", "example1", "--format", "json"];
    let first = dixc(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, dixc(&args).stdout);
    let reports: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert!(reports.as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn repro_csv_lists_cells() {
    let out = dixc(&["repro", "table1", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("table,row,column,expected,computed,match\n"));
    assert!(text.contains("table1,Sum rates,R1+R2+R3,15/2,15/2,true"));
}

#[test]
fn thread_cap_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_dixc"))
        .args(["repro", "table1"])
        .env("DIXC_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_dixc"))
        .args(["repro", "table1"])
        .env("DIXC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enumeration() {
    assert_eq!(stdout(&dixc(&["enumerate", "-n", "3", "--up-to-iso"])).lines().count(), 16);
    assert_eq!(stdout(&dixc(&["enumerate", "-n", "1"])).trim(), "(1)");
    let v = json(&["enumerate", "-n", "2", "--up-to-iso", "--with-regions"]);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 3);
    assert!(list.iter().all(|p| p["coincide"] == true));
    let v = json(&["enumerate", "-n", "1", "--with-regions"]);
    let rows = v[0]["outer"]["cons"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["rhs"] == "1" && r["origin"] != serde_json::Value::Null));
}
