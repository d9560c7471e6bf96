//! Black-box tests of the command-line binary.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cgl")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn check_passes_on_catalog() {
    let (code, stdout, _) = run(&["check", "catalog:quantum_plane"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("[PASS] cgl_certified"));
}

#[test]
fn catalog_query_parameters() {
    let (code, stdout, _) = run(&["primes", "catalog:example_3_2?r=1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("rank = 1"));
    let (code, stdout, _) = run(&["hmax", "catalog:quantum_affine_space?N=4"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("hmax_rank = 4"));
}

#[test]
fn json_and_human_verdicts_agree() {
    let (c1, human, _) = run(&["rel", "catalog:quantum_matrices_2x2"]);
    let (c2, json, _) = run(&["rel", "catalog:quantum_matrices_2x2", "--json"]);
    assert_eq!((c1, c2), (0, 0));
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    let verdicts = parsed["verdicts"].as_array().unwrap();
    let human_count = human.lines().filter(|l| l.contains("[PASS]") || l.contains("[FAIL]")).count();
    assert_eq!(verdicts.len(), human_count);
    assert!(verdicts.iter().all(|v| v["pass"].as_bool().unwrap()));
    for key in ["version", "source", "command", "verdicts", "data"] {
        assert!(parsed.get(key).is_some(), "missing key {}", key);
    }
}

#[test]
fn usage_errors_exit_2() {
    let (code, _, stderr) = run(&["check", "catalog:no_such_entry"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error:"));
    let (code, _, _) = run(&["check", "/nonexistent/file.json"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["basis", "catalog:quantum_plane"]);
    assert_eq!(code, 2); // missing --exponent
}

#[test]
fn non_cgl_input_exits_1() {
    // a derivation that is not locally nilpotent: delta_2(x1) = x1
    let dir = std::env::temp_dir().join("cgl_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{
            "name": "bad", "N": 2,
            "lambda": [{"k": 2, "j": 1, "c": "1", "e": 1}],
            "delta": [{"k": 2, "j": 1, "poly": [{"coeff": {"c": "1", "e": 0}, "exp": [1, 0]}]}]
        }"#,
    )
    .unwrap();
    let (code, stdout, _) = run(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.contains("[FAIL] cgl_certified"));
}

#[test]
fn deterministic_output() {
    let (_, a, _) = run(&["cauchon", "catalog:example_3_2?r=2", "--json"]);
    let (_, b, _) = run(&["cauchon", "catalog:example_3_2?r=2", "--json"]);
    assert_eq!(a, b);
}
