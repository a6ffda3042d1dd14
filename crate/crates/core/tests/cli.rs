use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use parity_search::QueryPlan;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_parity-search"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn construct(dir: &Path, n: usize, d: usize) -> String {
    let path = dir.join(format!("plan_{n}_{d}.json"));
    let p = path.to_str().unwrap().to_string();
    let o = run(&["construct", "--n", &n.to_string(), "--d", &d.to_string(), "--out", &p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn construct_reports_and_writes_plan() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), 7, 1);
    let plan = QueryPlan::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(plan.queries(), &[vec![1, 3, 5, 7], vec![2, 3, 6, 7], vec![4, 5, 6, 7]]);
    let o = run(&["construct", "--n", "7", "--d", "1", "--out", &path]);
    assert!(stdout(&o).contains("f = 3, dm = 3"));

    let one = construct(dir.path(), 1, 1);
    let plan = QueryPlan::from_json(&fs::read_to_string(one).unwrap()).unwrap();
    assert_eq!(plan.queries(), &[vec![1]]);

    assert_eq!(run(&["construct", "--n", "0", "--d", "1"]).status.code(), Some(2));
    let o = run(&["construct", "--n", "5", "--d", "2", "--out", dir.path().join("x.json").to_str().unwrap()]);
    assert!(stdout(&o).contains("outside"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), 31, 2);
    let o = run(&["verify", &path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("SEPARATING"));

    // items 2 and 3 share a column
    let dup = r#"{"n": 3, "d": 1, "m": null, "poly": null, "column_elements": [],
        "queries": [[1, 2, 3], [2, 3]], "matrix": ["111", "011"]}"#;
    let dup_path = dir.path().join("dup.json");
    fs::write(&dup_path, dup).unwrap();
    let o = run(&["verify", dup_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("NOT SEPARATING"));
    assert!(text.contains("X = {2}") && text.contains("Y = {3}"));

    let text = fs::read_to_string(&path).unwrap();
    let truncated = dir.path().join("trunc.json");
    fs::write(&truncated, &text[..text.len() / 3]).unwrap();
    assert_eq!(run(&["verify", truncated.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["verify", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["verify", &path, "--work-cap", "10"]).status.code(), Some(2));
}

#[test]
fn answer_then_decode() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), 7, 1);
    let o = run(&["answer", &path, "--set", "5"]);
    assert_eq!(stdout(&o).trim(), "101");
    for decoder in ["brute", "algebraic"] {
        let o = run(&["decode", &path, "--syndrome", "101", "--decoder", decoder]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), "{5}");
    }
    let o = run(&["decode", &path, "--syndrome", "000"]);
    assert_eq!(stdout(&o).trim(), "{}");
    assert_eq!(run(&["decode", &path, "--syndrome", "10"]).status.code(), Some(2));
    assert_eq!(run(&["answer", &path, "--set", "9"]).status.code(), Some(2));
}

#[test]
fn decode_no_match_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    // n = 5 in GF(8): the answer 111 would need item 7
    let path = construct(dir.path(), 5, 1);
    let o = run(&["decode", &path, "--syndrome", "111"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("NO MATCH"));
    let o = run(&["decode", &path, "--syndrome", "111", "--decoder", "algebraic"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), 63, 3);
    let record = dir.path().join("session.json");
    let o = run(&["simulate", &path, "--set", "", "--decoder", "brute", "--out", record.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&record).unwrap()).unwrap();
    assert_eq!(json["hidden"], serde_json::json!([]));
    assert_eq!(json["decoded"], serde_json::json!([]));
    assert!(json.get("timings").is_none());

    let o = run(&["simulate", &path, "--seed", "9", "--decoder", "algebraic", "--record-timings", "--out", record.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("MATCH"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&record).unwrap()).unwrap();
    assert_eq!(json["matched"], serde_json::json!(true));
    assert!(json["timings"]["decode_us"].is_number());

    let o = run(&["bounds", "--n", "15", "--d", "2"]);
    let row: Vec<String> = stdout(&o).lines().last().unwrap().split_whitespace().map(String::from).collect();
    assert_eq!(row, ["15", "2", "7", "8", "1"]);
    let o = run(&["bounds", "--n", "9", "--d", "0"]);
    let row: Vec<String> = stdout(&o).lines().last().unwrap().split_whitespace().map(String::from).collect();
    assert_eq!(row, ["9", "0", "0", "0", "0"]);
}

#[test]
fn baseline_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("baseline.json");
    let o = run(&["baseline", "--n", "15", "--d", "1", "--seed", "3", "--trials", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["constructed_f"], serde_json::json!(4));
    assert!(json["f_found"].as_u64().unwrap() >= 4);
    assert!(json["steps"].as_array().unwrap().iter().all(|s| s["attempts"] == 20));
}
