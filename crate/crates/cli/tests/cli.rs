use std::fs;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_metacycles");

fn fixture() -> String {
    format!("{}/../core/data/fig1.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("metacycles-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_fixture_is_clean() {
    let out = run(&["verify", &fixture()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["graph_cycle_count"], 16);
    assert_eq!(doc["clean"], true);
}

#[test]
fn row_sum_violation_exits_two() {
    let path = scratch(
        "broken.json",
        r#"{"states": [{"id": "x", "energy": "0"}, {"id": "y", "energy": "1"}, {"id": "z", "energy": "1"}],
            "edges": [{"pair": ["x", "y"], "q": "0.6"}, {"pair": ["x", "z"], "q": "0.6"}]}"#,
    );
    let out = run(&["validate", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("RowSumExceedsOne"));
}

#[test]
fn missing_file_and_disconnected_graph_exit_two() {
    assert_eq!(run(&["validate", "/nonexistent/landscape.json"]).status.code(), Some(2));
    let path = scratch(
        "split.json",
        r#"{"states": [{"id": "x", "energy": "0"}, {"id": "y", "energy": "1"}], "edges": []}"#,
    );
    let out = run(&["path-cycles", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DisconnectedGraph"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    // randomized subcommands need an explicit seed
    assert_eq!(run(&["fuzz", "--count", "3"]).status.code(), Some(1));
    assert_eq!(run(&["simulate", &fixture(), "--cycle", "i,j", "--betas", "3"]).status.code(), Some(1));
    // {a,b} is not a cycle
    let out = run(&["simulate", &fixture(), "--cycle", "a,b", "--betas", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn all_censored_simulation_exits_four() {
    // flat basin a..e walled in by p and q: the boundary is three steps from
    // c while the visit budget e^{β(0+ε)} rounds up to two steps
    let path = scratch(
        "basin.json",
        r#"{"states": [{"id": "p", "energy": "5"}, {"id": "a", "energy": "0"}, {"id": "b", "energy": "0"},
                       {"id": "c", "energy": "0"}, {"id": "d", "energy": "0"}, {"id": "e", "energy": "0"},
                       {"id": "q", "energy": "5"}],
            "edges": [["p", "a"], ["a", "b"], ["b", "c"], ["c", "d"], ["d", "e"], ["e", "q"]]}"#,
    );
    let out = run(&[
        "simulate", &path, "--cycle", "a,b,c,d,e", "--betas", "0.1", "--epsilon", "0.5",
        "--replicas", "50", "--seed", "3", "--from", "c", "--to", "e",
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn export_tree_is_dot() {
    let out = run(&["export-tree", &fixture()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph cycles {"));
    assert_eq!(text.matches("->").count(), 15);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("metacycles-out-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let target = dir.join("trace.json");
    let out = run(&["graph-cycles", &fixture(), "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(doc["n_s"], 4);
}

#[test]
fn fuzz_summary_is_clean() {
    let out = run(&["fuzz", "--count", "50", "--seed", "11", "--energy-min", "-2", "--energy-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["clean"], 50);
}
