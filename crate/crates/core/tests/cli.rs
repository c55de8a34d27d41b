use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kappanet"))
}

fn doc(name: &str) -> String {
    format!("{}/docs/networks/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    let input = input.to_vec();
    let writer = std::thread::spawn(move || stdin.write_all(&input));
    let out = child.wait_with_output().unwrap();
    writer.join().unwrap().unwrap();
    out
}

fn report(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn predict_n1() {
    let v = report(&run(&["predict", "--net", &doc("n1.json")]));
    let believed = v["results"]["believed"].as_object().unwrap();
    assert_eq!(believed.len(), 3);
    assert_eq!(believed["wet"], "not_wet");
    assert_eq!(v["command"], "predict");
    assert_eq!(v["inputs"]["net"].as_str().unwrap().len(), 64);
}

#[test]
fn report_field_order_is_stable() {
    let text = String::from_utf8(run(&["predict", "--net", &doc("n1.json")]).stdout).unwrap();
    let keys = ["\"command\"", "\"args\"", "\"inputs\"", "\"results\"", "\"counters\"", "\"wall_time_ms\""];
    let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn unknown_flag_exits_one() {
    let out = run(&["predict", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn validation_error_exits_two() {
    let out = run(&["predict", "--net", &doc("chain.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["predict", "--net", "/nonexistent/net.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_exits_three() {
    let out = run(&["scomplete", "--net", &doc("d1.json"), "--cs-cap", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["infer", "exact", "--net", &doc("diamond.json"), "--query", "d=d", "--cap", "4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scomplete_and_check_on_d1() {
    let v = report(&run(&["scomplete", "--net", &doc("d1.json")]));
    assert_eq!(v["results"]["plausible"]["d"], serde_json::json!(["d"]));
    assert_eq!(v["results"]["stages"][0]["cut_set"], serde_json::json!(["a"]));
    let v = report(&run(&["check", "--net", &doc("d1.json")]));
    assert_eq!(v["results"]["verdict"], "possibly-incomplete");
    assert_eq!(v["results"]["witness"].as_array().unwrap().len(), 4);
    let dir = tempfile::tempdir().unwrap();
    let believed = dir.path().join("believed.json");
    std::fs::write(&believed, r#"["a"]"#).unwrap();
    let v = report(&run(&["check", "--net", &doc("d1.json"), "--believed", believed.to_str().unwrap()]));
    assert_eq!(v["results"]["verdict"], "complete");
}

#[test]
fn oracle_agrees_on_d1() {
    let v = report(&run(&["oracle", "--net", &doc("d1.json")]));
    assert_eq!(v["results"]["plausible"]["d"], serde_json::json!(["d"]));
    assert_eq!(v["results"]["kappa"]["d"]["not_d"], 1);
}

#[test]
fn and_gap_pipeline() {
    let gen = run(&["gen", "and", "--n", "22", "--eps", "0.1"]);
    assert!(gen.status.success());
    let abs = run_with_stdin(&["abstract", "--eps", "0.1"], &gen.stdout);
    assert!(abs.status.success());
    let v = report(&run_with_stdin(&["predict"], &abs.stdout));
    assert_eq!(v["results"]["plausible"]["y"], serde_json::json!(["y"]));
}

#[test]
fn infer_methods_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let net = doc("diamond.json");
    let exact = report(&run(&["infer", "exact", "--net", &net, "--query", "d=not_d"]));
    let p = exact["results"]["probability"].as_f64().unwrap();
    let bounded = report(&run(&[
        "infer", "bounded", "--net", &net, "--query", "d=not_d", "--eps", "0.01", "--trace",
        trace.to_str().unwrap(),
    ]));
    assert!((bounded["results"]["lower"].as_f64().unwrap() - p).abs() < 1e-12);
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("step,lower,upper,elapsed\n"));
    assert!(!csv.contains('\r'));
    let search = report(&run(&[
        "infer", "search", "--net", &net, "--query", "d=not_d", "--strategy", "lookahead", "--budget", "4",
    ]));
    let (lo, hi) = (search["results"]["lower"].as_f64().unwrap(), search["results"]["upper"].as_f64().unwrap());
    assert!(lo <= p + 1e-12 && p <= hi + 1e-12);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["infer", "bounded", "--net", &doc("diamond.json"), "--query", "d=d", "--eps", "0.2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let a = run(&["gen", "random", "--seed", "9", "--kind", "prob", "--shape", "cyclic"]);
    let b = run(&["gen", "random", "--seed", "9", "--kind", "prob", "--shape", "cyclic"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn experiment_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    std::fs::write(
        &config,
        r#"{"seed": 3, "networks": [{"random": {"count": 3, "cyclic": true}}, {"chain": {"n": 4, "eps": 0.1}}],
            "eps": [0.2, 0.1, 0.01]}"#,
    )
    .unwrap();
    let out = run(&["experiment", "--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("network,eps,lm,instances,width,elapsed"));
    assert_eq!(lines.count(), 12);
    let again = run(&["experiment", "--config", config.to_str().unwrap()]);
    assert_eq!(out.stdout, again.stdout);
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"networks": [], "eps": [0.1]}"#).unwrap();
    let out = run(&["experiment", "--config", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}
