use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};

fn write_doc(name: &str, doc: &Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quasiq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string(doc).unwrap()).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_quasiq")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8(out.stderr).unwrap())
}

fn run_doc(task: &str, name: &str, doc: &Value, extra: &[&str]) -> (i32, Value) {
    let path = write_doc(name, doc);
    let mut args = vec![task, "--spec", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let (code, report, _) = run(&args);
    (code, report)
}

fn contact(q: &str) -> Value {
    json!({
        "bundle": {
            "base": [{"name": "x1", "parity": "even"}],
            "fibres": [{"name": "1", "parity": "even"}, {"name": "tau", "parity": "even"}]
        },
        "structure": {"S": "p_eta1*(p_x1 + eta1*p_tau)", "Q": q}
    })
}

fn entry<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["entries"].as_array().unwrap().iter().find(|e| e["name"] == name).unwrap()
}

#[test]
fn odd_contact_document_verifies() {
    let (code, report) = run_doc("verify-odd-jacobi", "contact", &contact("-p_tau"), &[]);
    assert_eq!(code, 0);
    assert_eq!(report["status"], "pass");
    assert_eq!(report["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn flipped_q_fails_the_third_condition() {
    let (code, report) = run_doc("verify-odd-jacobi", "flipped", &contact("p_tau"), &[]);
    assert_eq!(code, 1);
    let e = entry(&report, "{S,S} = -2QS");
    assert_eq!(e["status"], "fail");
    assert!(!e["residual"].as_str().unwrap().is_empty());
    assert_eq!(entry(&report, "{Q,Q} = 0")["status"], "pass");
}

#[test]
fn empty_bundle_transports_to_zero() {
    let (code, report) = run_doc("transport", "empty", &json!({"bundle": {}}), &[]);
    assert_eq!(code, 0);
    assert_eq!(report["output"]["structure"], json!({"D": {}, "q": "0"}));
}

#[test]
fn emitted_documents_reverify() {
    let (code, t) = run_doc("transport", "t-in", &contact("-p_tau"), &[]);
    assert_eq!(code, 0);
    assert_eq!(t["output"]["structure"]["q"], "xi_tau");
    let transported = t["output"].clone();
    assert_eq!(run_doc("verify-quasi-q", "t-out", &transported, &[]).0, 0);
    assert_eq!(run_doc("verify-odd-jacobi", "t-back", &transported, &[]).0, 0);

    let (code, s) = run_doc("split", "s-in", &transported, &[]);
    assert_eq!(code, 0);
    assert_eq!(s["output"]["structure"]["homological"], json!({"x1": "xi1"}));
    let split = s["output"].clone();
    assert_eq!(run_doc("verify-quasi-q", "s-out", &split, &[]).0, 0);

    let (code, m) = run_doc("merge", "m-in", &split, &[]);
    assert_eq!(code, 0);
    assert_eq!(m["output"], transported);
    assert_eq!(run_doc("verify-quasi-q", "m-out", &m["output"], &[]).0, 0);
}

#[test]
fn split_of_invalid_input_fails() {
    let doc = json!({
        "bundle": {"base": [], "fibres": [{"name": "1", "parity": "even"}, {"name": "2", "parity": "even"}]},
        "structure": {"brackets": [[["0", "0"], ["0", "1"]], [["0", "-1"], ["0", "0"]]], "cocycle": ["0", "1"]}
    });
    let (code, report) = run_doc("split", "bad-split", &doc, &[]);
    assert_eq!(code, 1);
    assert!(report.get("output").is_none());
    assert_eq!(run_doc("dual-schouten", "bad-dual", &doc, &[]).0, 1);
}

#[test]
fn examples_pass() {
    for args in [
        vec!["example", "odd-contact", "--dim", "2"],
        vec!["example", "lie-algebra", "--preset", "solvable2"],
        vec!["example", "flat-connection"],
    ] {
        let (code, report, _) = run(&args);
        assert_eq!(code, 0, "{args:?}");
        let emitted = report["output"].clone();
        let verify = if args[1] == "flat-connection" { "verify-quasi-q" } else { "verify-odd-jacobi" };
        assert_eq!(run_doc(verify, args[1], &emitted, &[]).0, 0, "{args:?}");
    }
}

#[test]
fn bracket_and_axioms() {
    let doc = contact("-p_tau");
    let (code, report) = run_doc("bracket", "br", &doc, &["--x", "eta1", "--y", "x1"]);
    assert_eq!(code, 0);
    // anchor term Q_1^x ∂X/∂η_1 ∂Y/∂x with Q_1^x = 1
    assert_eq!(report["output"]["bracket"], "1");
    assert_eq!(run_doc("axioms", "ax1", &doc, &["--seed", "3"]).0, 0);
    let (code, report) = run_doc("axioms", "ax0", &doc, &["--epsilon", "0"]);
    assert_eq!(code, 1);
    assert_eq!(entry(&report, "skewsymmetry")["status"], "fail");
}

#[test]
fn schoutenise_and_dual_schouten() {
    let (code, report) = run_doc("schoutenise", "sch", &contact("-p_tau"), &[]);
    assert_eq!(code, 0);
    assert!(report["output"]["S_bar"].as_str().unwrap().contains('u'));
    let (code, lie, _) = run(&["example", "lie-algebra"]);
    assert_eq!(code, 0);
    let (code, report) = run_doc("dual-schouten", "ds", &lie["output"], &[]);
    assert_eq!(code, 0);
    assert_eq!(report["output"]["phi_bar"], "p_eta1");
}

#[test]
fn input_errors_exit_with_two() {
    let mut doc = contact("-p_tau");
    doc["structure"]["S"] = json!("p_eta1 p_x1");
    assert_eq!(run_doc("verify-odd-jacobi", "syntax", &doc, &[]).0, 2);
    doc["structure"]["S"] = json!("p_y1");
    assert_eq!(run_doc("verify-odd-jacobi", "unknown", &doc, &[]).0, 2);
    assert_eq!(run(&["no-such-task"]).0, 2);
    assert_eq!(run(&["verify-odd-jacobi"]).0, 2);
    assert_eq!(run(&["verify-odd-jacobi", "--spec", "/nonexistent/spec.json"]).0, 2);
    let (code, _, stderr) = run(&["bracket", "--spec", write_doc("nox", &contact("-p_tau")).to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--x"));
}

#[test]
fn output_is_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let a = run(&["example", "odd-contact", "--dim", "2"]).1;
    let b = run(&["example", "odd-contact", "--dim", "2"]).1;
    assert_eq!(strip(a), strip(b));
    let text = Command::new(env!("CARGO_BIN_EXE_quasiq"))
        .args(["example", "flat-connection", "--format", "text"])
        .output()
        .unwrap();
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.starts_with("task: example\n[PASS] D^2 = qD"));
}
