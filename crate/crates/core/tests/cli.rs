use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

const IJKF: &str = "# i j k f\n4\n1 2 3 1\n1 2 3 1\n1 2 3 2\n1 2 3 1\nnames: i j k f\n";

fn cayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn classify_reports_json() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "ijkf.txt", IJKF);
    let out = cayley(&["classify", input.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["is_left_zero"], true);
    assert_eq!(report["is_trivial"], false);
    assert_eq!(report["is_finite"], true);
}

#[test]
fn enumerate_reports_closed_tables() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "ijkf.txt", IJKF);
    let out = cayley(&["enumerate", input.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["status"], "closed");
    assert_eq!(report["element_count"], 2);
    assert_eq!(report["cayley"], serde_json::json!([[1, 1], [2, 2]]));

    let z2 = write(&dir, "z2.txt", "2\n1 2\n2 1\n");
    let out = cayley(&["enumerate", z2.to_str().unwrap(), "--budget", "50"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["status"], "exceeded");
    assert_eq!(report["cap_hit"], false);
}

#[test]
fn act_prints_outputs() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "lz.txt", &stdout(&cayley(&["table", "left_zero:2"])));
    let out = cayley(&["act", input.to_str().unwrap(), "--word", "1", "--prefix", "2,2,2"]);
    assert_eq!(stdout(&out).trim(), "1,1,1");
    // The last state applied wins in a left zero semigroup.
    let out = cayley(&["act", input.to_str().unwrap(), "--word", "1,2", "--prefix", "1,2,1"]);
    assert_eq!(stdout(&out).trim(), "2,2,2");

    let z2 = write(&dir, "z2.txt", &stdout(&cayley(&["table", "cyclic:2"])));
    let out = cayley(&["act", z2.to_str().unwrap(), "--word", "2", "--prefix", "1,1,1"]);
    assert_eq!(stdout(&out).trim(), "2,2,2");
}

#[test]
fn machine_writes_dot() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "ijkf.txt", IJKF);
    let dot = dir.path().join("ijkf.dot");
    let out = cayley(&["machine", input.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph cayley {"));
    assert_eq!(text.matches("->").count(), 16);
    assert!(text.contains("s2 -> s1 [label=\"f|j\"];"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let malformed = write(&dir, "bad.txt", "2\n1 2\n");
    assert_eq!(cayley(&["classify", malformed.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(cayley(&["classify", "/nonexistent/table.txt"]).status.code(), Some(2));

    let nonassoc = write(&dir, "nonassoc.txt", "2\n1 2\n1 1\n");
    let out = cayley(&["classify", nonassoc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(2*1)*2 != 2*(1*2)"));

    let out = cayley(&["verify", "--max-order", "2", "--budget", "500"]);
    assert_eq!(out.status.code(), Some(0));
    // Some order-3 semigroup has a finite C(S) with 5 elements, so a budget
    // of 3 makes a finite prediction disagree with the engine.
    let out = cayley(&["verify", "--max-order", "3", "--budget", "3"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3;1 1 1;1 1 2;1 2 3"));
}

#[test]
fn corpus_and_table_commands() {
    let out = cayley(&["corpus", "--order", "2"]);
    assert_eq!(stdout(&out).lines().count(), 4);
    let out = cayley(&["corpus", "--order", "3", "--mode", "labeled", "--filter", "monoid"]);
    assert!(out.status.success());
    assert_eq!(stdout(&cayley(&["table", "cyclic:2"])), "2\n1 2\n2 1\n");
}
