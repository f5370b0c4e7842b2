use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wheelpath"))
        .args(args)
        .env_remove("WHEELPATH_OUT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden").join(name)
}

#[test]
fn gen_counts_edges() {
    let o = run(&["gen", "--n", "4", "--format", "edgelist"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().skip(1).count(), 72);
    let o = run(&["gen", "--n", "4", "--family", "bubble-sort-star", "--format", "edgelist"]);
    assert_eq!(stdout(&o).lines().skip(1).count(), 60);
    let o = run(&["gen", "--n", "4"]);
    assert!(stdout(&o).starts_with("graph"));
}

#[test]
fn gen_rejects_small_degree() {
    assert_eq!(run(&["gen", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn structure_reports_case_and_counts() {
    let o = run(&["structure", "--n", "5", "--omega", "e;(1 2 3);(1 3 2)", "--strict", "--format", "report"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("odd-1.2.2"), "{text}");
    assert!(text.contains("[2, 4, 4]"), "{text}");
    let o = run(&["structure", "--n", "4", "--random", "--seed", "3", "--format", "report"]);
    assert!(stdout(&o).contains("[2, 2, 2]"));
}

#[test]
fn structure_rejects_repeated_terminal() {
    let o = run(&["structure", "--n", "5", "--omega", "e;e;(1 2)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn structure_certificate_matches_golden() {
    let o = run(&["structure", "--n", "5", "--omega", "e;(1 2 3);(1 3 2)", "--strict", "--seed", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), fs::read_to_string(golden("cw5.json")).unwrap());
}

#[test]
fn pi3_exhaustive_at_four_matches() {
    let o = run(&["pi3", "--n", "4", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("MATCH") && text.contains("2024"), "{text}");
    assert_eq!(run(&["pi3", "--n", "5", "--exhaustive"]).status.code(), Some(2));
    assert_eq!(run(&["pi3", "--n", "5", "--samples", "10"]).status.code(), Some(2));
}

#[test]
fn pi3_sampled_is_independent_of_jobs() {
    let one = run(&["pi3", "--n", "5", "--samples", "60", "--seed", "9", "--jobs", "1"]);
    let two = run(&["pi3", "--n", "5", "--samples", "60", "--seed", "9", "--jobs", "2"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&two));
}

#[test]
fn lemmas_pass_and_fault_fails() {
    let o = run(&["lemmas", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
    let o = run(&["lemmas", "--n", "4", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("FAIL"));
    assert_eq!(run(&["lemmas", "--n", "6"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    for name in ["cw4.json", "cw5.json", "cw5_three_copies.json"] {
        let o = run(&["verify", golden(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}");
    }
    let dir = tempfile::tempdir().unwrap();
    let doc = fs::read_to_string(golden("cw4.json")).unwrap();
    let mut cert: serde_json::Value = serde_json::from_str(&doc).unwrap();
    let path = cert["omega_paths"][0].as_array_mut().unwrap();
    let last = path.len() - 1;
    path.swap(0, last);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string_pretty(&cert).unwrap()).unwrap();
    let o = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("violation"));

    let wrong = dir.path().join("wrong.json");
    fs::write(&wrong, doc.replacen("\"ranking\"", "\"rank_order\"", 1)).unwrap();
    assert_eq!(run(&["verify", wrong.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["verify", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_wheelpath"))
        .args(["lemmas", "--n", "4"])
        .env("WHEELPATH_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("lemmas-n4.txt")).unwrap();
    assert!(text.contains("cross edges"));
    let rows: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("lemmas-n4.json")).unwrap()).unwrap();
    assert!(rows.as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn certificates_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}.json"));
        let o = run(&["structure", "--n", "5", "--random", "--seed", "11", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        docs.push(fs::read(&out).unwrap());
    }
    assert_eq!(docs[0], docs[1]);
}
