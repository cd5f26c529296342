use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn ordlab(args: &[&str], stdin: &str) -> Output {
    ordlab_env(args, stdin, &[])
}

fn ordlab_env(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ordlab"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).env_remove("ORDLAB_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn generate(name: &str, params: &[&str]) -> String {
    let mut args = vec!["gen", name];
    for p in params {
        args.extend(["--param", p]);
    }
    let out = ordlab(&args, "");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn statuses(report: &Value) -> Vec<(String, String)> {
    report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["law"].as_str().unwrap().to_string(), v["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn completion_pipeline_passes() {
    let scn = generate("ex78-1", &[]);
    let out = ordlab(&["--json", "pair", "complete", "-", "--samples", "1000", "--seed", "0"], &scn);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["seed"], 0);
    assert_eq!(r["samples"], 1000);
    assert_eq!(r["result"]["direction"], "increasing");
    assert_eq!(r["result"]["verdict"], "iso");
    assert!(statuses(&r).iter().all(|(_, s)| s == "pass"));
}

#[test]
fn striped_example_is_reported_not_failed() {
    let out = ordlab(&["--json", "axioms", "-"], &generate("ex11-5", &[]));
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["result"]["totally_degenerated"]["holds"], false);
    assert_eq!(r["result"]["degenerated"]["holds"], true);
}

#[test]
fn malformed_input_exits_2() {
    let out = ordlab(&["axioms", "-"], "{ not json");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));
    let out = ordlab(&["--json", "quotient", "-"], r#"{"version":1,"kind":"closure","payload":{"construction":"down"}}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(json_of(&out)["error"].is_string());
}

#[test]
fn antichain_quotient_is_a_violation() {
    let file = r#"{"version":1,"kind":"closure","payload":{"construction":"down","base":{"kind":"poset","size":2}}}"#;
    let out = ordlab(&["--json", "quotient", "-"], file);
    assert_eq!(out.status.code(), Some(1));
    let r = json_of(&out);
    assert_eq!(statuses(&r), vec![("totally_degenerated".to_string(), "fail".to_string())]);
    assert!(r["verdicts"][0]["witness"].as_str().unwrap().contains("X = {0, 1}"));
}

#[test]
fn quotient_of_linear_fibered() {
    let out = ordlab(&["--json", "quotient", "-"], &generate("ex11-3", &[]));
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["result"]["classes"], 2);
    assert_eq!(r["result"]["quotient"]["classes"][1].as_array().unwrap().len(), 3);
}

#[test]
fn invariant_of_subsets() {
    let file = generate("ex11-3", &[]);
    let whole = json_of(&ordlab(&["--json", "inv", "-"], &file));
    assert_eq!(whole["result"]["length"], 2);
    let one = json_of(&ordlab(&["--json", "inv", "-", "--subset", "1.0,1.2"], &file));
    assert_eq!(one["result"]["length"], 1);
    let none = json_of(&ordlab(&["--json", "inv", "-", "--subset", ""], &file));
    assert_eq!(none["result"]["invariant"], "∅");
    let out = ordlab(&["inv", "-", "--subset", "nope"], &file);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_on_colored_chain_reports_ambient() {
    let out = ordlab(&["--json", "witness", "-"], &generate("ex26", &[]));
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["result"]["locus_convex"], true);
    assert_eq!(r["result"]["ambient"]["convex"], false);
}

#[test]
fn generator_errors_exit_2() {
    assert_eq!(ordlab(&["gen", "ex99"], "").status.code(), Some(2));
    assert_eq!(ordlab(&["gen", "ex11-1", "--param", "window=3"], "").status.code(), Some(2));
    assert_eq!(ordlab(&["gen", "ex11-1", "--param", "n"], "").status.code(), Some(2));
}

#[test]
fn generated_files_reparse_to_the_library_value() {
    use ordlab::generators::{gen, GenSpec, NAMES};
    use ordlab::io::ScenarioFile;
    for name in NAMES {
        let text = generate(name, &[]);
        let parsed = ScenarioFile::from_json(&text).unwrap();
        assert_eq!(parsed, gen(&GenSpec::new(name)).unwrap().to_file(), "{name}");
    }
}

#[test]
fn commute_flag_is_cross_checked() {
    let ok = ordlab(&["pair", "direction", "-"], &generate("ex73-2", &[]));
    assert_eq!(ok.status.code(), Some(0));
    let bad = ordlab(&["--json", "pair", "direction", "-"], &generate("ex73-2", &["commute=false"]));
    assert_eq!(bad.status.code(), Some(1));
    assert!(json_of(&bad)["verdicts"][0]["witness"].as_str().unwrap().contains("commute"));
}

#[test]
fn windowed_dependency_laws() {
    let out = ordlab(&["--json", "pair", "verify", "-", "--samples", "200"], &generate("zigzag", &[]));
    assert_eq!(out.status.code(), Some(0));
    let laws = statuses(&json_of(&out));
    assert!(laws.contains(&("e_closed".to_string(), "pass".to_string())));
}

#[test]
fn deps_at_a_point() {
    let file = generate("ex78-1", &[]);
    let r = json_of(&ordlab(&["--json", "pair", "deps", "-", "--at", "1+1*r2"], &file));
    let d = &r["result"][0];
    assert_eq!(d["d"]["kind"], "segment");
    assert_eq!(d["d"]["cut"]["side"], "below");
    let out = ordlab(&["pair", "deps", "-", "--at", "1/2"], &file);
    assert_eq!(out.status.code(), Some(2), "rational point is not an irrational class");
}

#[test]
fn classify_both_kinds() {
    let b = json_of(&ordlab(&["--json", "pair", "classify", "-"], &generate("ex73-1", &[])));
    assert_eq!(b["result"]["kind"], "bounded");
    let u = json_of(&ordlab(&["--json", "pair", "classify", "-"], &generate("ex78-1", &[])));
    assert_eq!(u["result"]["kind"], "unbounded");
}

#[test]
fn empty_invariant_completion() {
    let out = ordlab(&["--json", "pair", "complete", "-"], &generate("empty-inv", &[]));
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["result"]["p_completion"], "one_element");
    assert_eq!(r["result"]["q_completion"], "one_element");
    let full = ordlab(&["pair", "complete", "-"], &generate("empty-inv", &["full_q=1"]));
    assert_eq!(full.status.code(), Some(1));
}

#[test]
fn seed_environment_overrides_flag() {
    let file = generate("ex78-1", &[]);
    let out = ordlab_env(&["--json", "pair", "verify", "-", "--seed", "3", "--samples", "50"], &file, &[("ORDLAB_SEED", "11")]);
    assert_eq!(json_of(&out)["seed"], 11);
    let bad = ordlab_env(&["pair", "verify", "-"], &file, &[("ORDLAB_SEED", "x")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let file = generate("ex78-2", &[]);
    let run = || {
        let mut r = json_of(&ordlab(&["--json", "pair", "verify", "-", "--samples", "100", "--seed", "5"], &file));
        r.as_object_mut().unwrap().remove("timing_ms");
        r
    };
    assert_eq!(run(), run());
}

#[test]
fn realize_then_invariant() {
    let sys = ordlab(&["realize", "-"], r#"["a","b","c"]"#);
    assert_eq!(sys.status.code(), Some(0));
    let r = json_of(&ordlab(&["--json", "inv", "-"], &String::from_utf8(sys.stdout).unwrap()));
    assert_eq!(r["result"]["length"], 3);

    let sys = ordlab(&["realize", "-"], r#"{"order":["a","b","c"],"style":"zwindow","window":3}"#);
    let text = String::from_utf8(sys.stdout).unwrap();
    let q = json_of(&ordlab(&["--json", "quotient", "-"], &text));
    assert_eq!(q["result"]["classes"], 3);
    assert_eq!(q["result"]["quotient"]["classes"][0], serde_json::json!(["a.0", "a.1", "a.2"]));

    let empty = ordlab(&["realize", "-"], "[]");
    let r = json_of(&ordlab(&["--json", "inv", "-"], &String::from_utf8(empty.stdout).unwrap()));
    assert_eq!(r["result"]["invariant"], "∅");
}

#[test]
fn suite_passes() {
    let out = ordlab(&["suite", "--seed", "0"], "");
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.matches("PASS").count(), 10, "{text}");
}
