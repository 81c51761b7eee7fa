//! End-to-end tests of the `qprefix` binary: exit codes, JSON output and
//! seeded determinism.

use std::process::Command;

use qprefix_cli::codebook::CodebookFile;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qprefix(args: &[&str]) -> Run {
    qprefix_env(args, &[])
}

fn qprefix_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qprefix"));
    cmd.args(args).env_remove("QPREFIX_TOLERANCE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let output = cmd.output().expect("binary runs");
    Run {
        code: output.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&output.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
    }
}

#[test]
fn eval_prints_rendered_operator() {
    let run = qprefix(&["eval", "dm(1/sqrt(2)*|1> + 1/sqrt(2)*|110>)^2"]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    assert_eq!(run.stdout.trim(), "0.5 |1><1| + 0.5 |11><11|");
}

#[test]
fn eval_norm_annotation_and_value() {
    let run = qprefix(&["eval", "norm((3/5*|e> + 4/5*|0>) (x)[{1}] |1>)"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout.trim(), "0.8");

    let run = qprefix(&["eval", "(3/5*|e> + 4/5*|0>) (x)[{1}] |1>"]);
    assert_eq!(
        run.stdout.trim(),
        "0.8 |01>\nnorm: 0.8\nnormalization: input norms 1 * 1, output norm 0.8, lost weight 0.36"
    );

    // the full projection loss shows up as lost weight
    let run = qprefix(&["eval", "|11> (x)[3,4] |0>", "--json"]);
    let json: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    let report = &json["normalization_report"];
    assert_eq!(report["output_norm"].as_f64().unwrap(), 0.0);
    assert!((report["lost_weight"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn eval_exit_codes() {
    let parse_error = qprefix(&["eval", "<|0| , |0|>"]);
    assert_eq!(parse_error.code, 2);
    assert!(parse_error.stderr.contains("parse error"));
    assert!(parse_error.stderr.contains("line 1"));

    let eval_error = qprefix(&["eval", "|0>^2"]);
    assert_eq!(eval_error.code, 3);
    assert!(eval_error.stderr.contains("evaluation error"));

    let unbound = qprefix(&["eval", "nope + |0>"]);
    assert_eq!(unbound.code, 3);
    assert!(unbound.stderr.contains("unbound"));
}

#[test]
fn eval_with_bindings_file() {
    let run = qprefix(&[
        "eval",
        "<psi | phi>",
        "--bindings",
        &fixture("strange.json"),
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    assert_eq!(run.stdout.trim(), "0");

    let run = qprefix(&["eval", "dm(phi)^2", "--bindings", &fixture("strange.json")]);
    assert_eq!(run.stdout.trim(), "0.5 |01><01| + 0.5 |10><10|");
}

#[test]
fn eval_json_round_trips_through_codebook_reader() {
    let run = qprefix(&["eval", "1/sqrt(2)*|0> + 1/sqrt(2)*|00>", "--json"]);
    assert_eq!(run.code, 0);
    let json: serde_json::Value = serde_json::from_str(&run.stdout).expect("valid JSON");
    assert_eq!(json["kind"], "vector");

    // vector terms use the codebook term schema; wrap and re-read
    let codebook = serde_json::json!({
        "format_version": 1,
        "vectors": [{ "label": "fromjson", "terms": json["terms"] }],
    });
    let file = CodebookFile::from_json(&codebook.to_string()).unwrap();
    let vectors = file.parse_vectors().unwrap();
    assert_eq!(vectors.len(), 1);
    assert!((vectors[0].1.norm() - 1.0).abs() < 1e-9);
}

#[test]
fn check_exit_codes_and_conditions() {
    let ok = qprefix(&["check", &fixture("strange.json")]);
    assert_eq!(ok.code, 0, "stderr: {}", ok.stderr);
    assert!(ok.stdout.contains("condition 4: prefix-free"));

    let single = qprefix(&["check", &fixture("strange.json"), "--condition", "2"]);
    assert_eq!(single.code, 0);
    assert!(single.stdout.contains("condition 2"));
    assert!(!single.stdout.contains("condition 1:"));

    let failing = qprefix(&["check", &fixture("self_prefix.json")]);
    assert_eq!(failing.code, 1);
    assert!(failing.stdout.contains("s=0"));
    assert!(failing.stdout.contains("0.5"));

    let malformed = qprefix(&["check", &fixture("empty.json")]);
    assert_eq!(malformed.code, 2);

    let bad_condition = qprefix(&["check", &fixture("strange.json"), "--condition", "9"]);
    assert_eq!(bad_condition.code, 2);
}

#[test]
fn check_json_shape() {
    let run = qprefix(&["check", &fixture("self_prefix.json"), "--json"]);
    assert_eq!(run.code, 1);
    let json: serde_json::Value = serde_json::from_str(&run.stdout).expect("valid JSON");
    assert_eq!(json["prefix_free"], serde_json::Value::Bool(false));
    let witness = &json["conditions"][0]["witness"];
    assert_eq!(witness["suffix"], "0");
    assert!((witness["overlap_abs"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn kraft_reports_chain_and_exit_codes() {
    let run = qprefix(&["kraft", &fixture("strange_plus.json")]);
    assert_eq!(run.code, 0);
    assert!(run
        .stdout
        .contains("chain: 0.625 <= 0.7803300859 <= 0.8125 <= 1 : HOLDS"));
    assert!(run
        .stdout
        .contains("equality case (all length eigenstates): no"));

    let classical = qprefix(&["kraft", &fixture("classical.json")]);
    assert!(classical.stdout.contains("chain: 1 <= 1 <= 1 <= 1 : HOLDS"));
    assert!(classical
        .stdout
        .contains("equality case (all length eigenstates): yes"));

    let nonorthonormal = qprefix(&["kraft", &fixture("nonorthonormal.json")]);
    assert_eq!(nonorthonormal.code, 3);
    assert!(nonorthonormal.stderr.contains("not orthonormal"));

    let missing = qprefix(&["kraft", "/no/such/file.json"]);
    assert_eq!(missing.code, 2);
}

#[test]
fn restrict_and_concat_commands() {
    let run = qprefix(&["restrict", "dm(1/sqrt(2)*|00> - 1/sqrt(2)*|1111>)", "[1,3]"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout.trim(), "0.5 |00><00| + 0.5 |111><111|");

    let bad_set = qprefix(&["restrict", "dm(|0>)", "(1,2)"]);
    assert_eq!(bad_set.code, 2);

    let not_operator = qprefix(&["restrict", "|0>", "[1,2]"]);
    assert_eq!(not_operator.code, 3);
    assert!(not_operator.stderr.contains("dm"));

    let concat = qprefix(&[
        "concat",
        "1/sqrt(2)*|0> + 1/sqrt(2)*|00>",
        "1/sqrt(2)*|0> - 1/sqrt(2)*|00>",
    ]);
    assert_eq!(concat.code, 0);
    assert!(concat.stdout.contains("0.5 |00> - 0.5 |0000>"));
    assert!(concat.stdout.contains("norm: 0.7071067812"));
}

#[test]
fn oracle_guard_and_determinism() {
    let guard = qprefix(&["oracle", "--cells", "12"]);
    assert_eq!(guard.code, 4);

    let a = qprefix(&[
        "oracle", "--cells", "4", "--trials", "25", "--seed", "7", "--json",
    ]);
    let b = qprefix(&[
        "oracle", "--cells", "4", "--trials", "25", "--seed", "7", "--json",
    ]);
    assert_eq!(a.code, 0);
    assert_eq!(
        a.stdout, b.stdout,
        "same seed must reproduce bit-identically"
    );

    let json: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(json["pass"], serde_json::Value::Bool(true));
    assert!(json["max_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn oracle_sweeps_expression() {
    let run = qprefix(&[
        "oracle",
        "--expr",
        "dm(1/sqrt(2)*|00> - 1/sqrt(2)*|1111>)",
        "--cells",
        "5",
        "--trials",
        "10",
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    assert!(run.stdout.contains("expr sweep"));
    assert!(run.stdout.contains("PASS"));
}

#[test]
fn tolerance_env_and_flag() {
    // a loose tolerance admits a mildly non-orthonormal codebook
    let loose = qprefix_env(
        &["kraft", &fixture("slightly_off.json")],
        &[("QPREFIX_TOLERANCE", "0.2")],
    );
    assert_eq!(loose.code, 0, "stderr: {}", loose.stderr);

    // the flag takes precedence over the environment
    let strict = qprefix_env(
        &[
            "kraft",
            &fixture("slightly_off.json"),
            "--tolerance",
            "1e-9",
        ],
        &[("QPREFIX_TOLERANCE", "0.2")],
    );
    assert_eq!(strict.code, 3);

    let invalid = qprefix_env(
        &["kraft", &fixture("classical.json")],
        &[("QPREFIX_TOLERANCE", "not-a-number")],
    );
    assert_eq!(invalid.code, 2);
}
