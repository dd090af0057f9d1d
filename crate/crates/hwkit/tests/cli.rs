use std::path::PathBuf;

use hwkit::ResultEnvelope;
use serde_json::Value;

fn hwkit(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hwkit").chain(args.iter().copied()).chain(["--no-cache"]);
    let code = hwkit::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, ResultEnvelope) {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, out, err) = hwkit(&full);
    let env = ResultEnvelope::from_json(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}"));
    (code, env)
}

fn strings(v: &Value) -> Vec<String> {
    let mut s: Vec<String> = v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    s.sort();
    s
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn classify_cusp_at_its_log_canonical_threshold() {
    let (code, env) = json(&["classify", "--poly", "x1^2+x2^3", "--weights", "1/2,1/3", "--alpha", "5/6"]);
    assert_eq!(code, 0);
    assert_eq!(env.outputs["lc"], true);
    assert_eq!(env.outputs["plt"], true);
    assert_eq!(env.outputs["klt"], false);
}

#[test]
fn classify_below_threshold_is_klt() {
    let (_, env) = json(&["classify", "--poly", "x1^2+x2^3", "--weights", "1/2,1/3", "--alpha", "1/2"]);
    assert_eq!(env.outputs["klt"], true);
    let (_, env) = json(&["classify", "--exponents", "1,1", "--alpha", "1"]);
    assert_eq!((env.outputs["lc"].as_bool(), env.outputs["klt"].as_bool()), (Some(true), Some(false)));
}

#[test]
fn node_bounds() {
    let (code, env) = json(&["bounds", "--poly", "x1*x2", "--alpha", "1"]);
    assert_eq!(code, 0);
    assert_eq!(env.outputs["weight_bounds"], serde_json::json!([4, 4]));
    assert_eq!(env.outputs["genlevel"], 0);
}

#[test]
fn node_weight_table() {
    let (code, env) = json(&["snc", "--exponents", "1,1", "--alpha", "1", "--kmax", "1"]);
    assert_eq!(code, 0);
    let rows = env.outputs["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let at = |k: u64, l: u64| {
        let row = rows.iter().find(|r| r["k"] == k && r["l"] == l).unwrap();
        strings(&row["generators"])
    };
    for k in 0..2 {
        assert_eq!(at(k, 0), ["x1*x2"]);
        assert_eq!(at(k, 1), ["x1", "x2"]);
        assert_eq!(at(k, 2), ["1"]);
    }
    assert_eq!(strings(&env.outputs["multiplier_ideal"]), ["x1*x2"]);
}

#[test]
fn alpha_zero_is_routed_to_one_with_a_note() {
    let (_, zero) = json(&["snc", "--exponents", "1,1", "--alpha", "0"]);
    let (_, one) = json(&["snc", "--exponents", "1,1", "--alpha", "1"]);
    assert_eq!(zero.outputs, one.outputs);
    assert!(zero.messages.iter().any(|m| m.contains("alpha = 0")));
}

#[test]
fn negative_alpha_fails_the_hypothesis() {
    let (code, env) = json(&["snc", "--exponents", "1,1", "--alpha", "-1/2"]);
    assert_eq!(code, 2);
    assert_eq!(env.status, hwkit::Status::HypothesisFailed);
    assert!(env.outputs.is_null());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(hwkit(&["snc", "--exponents", "1,x", "--alpha", "1"]).0, 1);
    assert_eq!(hwkit(&["classify", "--alpha", "1"]).0, 1);
    assert_eq!(hwkit(&["frobnicate"]).0, 1);
    assert_eq!(hwkit(&["--help"]).0, 0);
}

#[test]
fn certified_b_function_of_the_node() {
    let (code, env) = json(&["verify", "bfun", "--poly", "x1*x2", "--b", "(s+1)^2", "--order", "2", "--xdeg", "2"]);
    assert_eq!(code, 0, "{}", env.to_json());
    let cert = &env.certificates[0];
    assert_eq!(cert["equation"]["verdict"], "member");
    assert_eq!(cert["minimal_at_bound"], true);
}

#[test]
fn wrong_b_function_is_not_certified() {
    let (code, env) = json(&["verify", "bfun", "--poly", "x1*x2", "--b", "(s+1)", "--order", "2", "--xdeg", "2"]);
    assert_eq!(code, 3);
    assert!(env.messages.iter().any(|m| m.contains("doubling")), "{:?}", env.messages);
}

#[test]
fn closed_form_b_functions() {
    let (_, env) = json(&["bfun", "--poly", "x1^2+x2^3", "--weights", "1/2,1/3"]);
    let mut roots: Vec<String> =
        env.outputs["b_function"]["roots"].as_array().unwrap().iter().map(|r| r["root"].as_str().unwrap().into()).collect();
    roots.sort();
    assert_eq!(roots, ["-1", "-5/6", "-7/6"]);
}

#[test]
fn ppd_file_agrees_with_the_node_table() {
    let file = data("node.ann");
    let (code, env) = json(&["ppd", "--input", &file, "--l", "1", "--k", "0", "--order", "3", "--xdeg", "6"]);
    assert_eq!(code, 0, "{}", env.to_json());
    let mut gens: Vec<String> = env.outputs["presentation"]["summands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["generator"].as_str().unwrap().to_string())
        .collect();
    gens.sort();
    assert_eq!(gens, ["x1", "x2"]);
}

#[test]
fn missing_ppd_file_is_an_io_error() {
    let (code, _, err) = hwkit(&["ppd", "--input", "/nonexistent/node.ann", "--l", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("io error"));
}

#[test]
fn text_and_json_agree_on_status() {
    let (code, text, _) = hwkit(&["classify", "--exponents", "2,3", "--alpha", "1/3"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("hwkit classify: ok"));
    assert!(text.contains("klt: false"));
}
