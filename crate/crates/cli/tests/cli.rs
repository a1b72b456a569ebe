use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

const LINF3: &str = r#"{"type":"linf","n":3}"#;
const LINF5: &str = r#"{"type":"linf","n":5}"#;
const L1_3: &str = r#"{"type":"l1","n":3}"#;
const PRISM: &str = r#"{"type":"custom","vertices":[[1,0,1],[0,1,1],[-1,0,1],[0,-1,1],[1,0,-1],[0,1,-1],[-1,0,-1],[0,-1,-1]]}"#;
const LINF5_BASIS: &str = "[[-4,2,3,1,3],[1,-5,4,2,-3],[1,3,-7,4,6]]";

fn run(args: &[&str], stdin: Option<&str>) -> (i32, Value) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_coapprox"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    let Output { status, stdout, .. } = child.wait_with_output().unwrap();
    let text = String::from_utf8(stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    (status.code().unwrap(), value)
}

#[test]
fn norm_of_a_point() {
    let (code, out) = run(&["norm", "--space", LINF3, "--point", "[3,0,2]"], None);
    assert_eq!(code, 0);
    assert_eq!(out["norm"], "3");
}

#[test]
fn linf5_basis_is_strongly_anti() {
    let (code, out) = run(&["classify", "--space", LINF5, "--basis", LINF5_BASIS], None);
    assert_eq!(code, 0);
    assert_eq!(out["strongly_anti"], "yes");
    assert_eq!(out["anti"], "yes");
    assert_eq!(out["engine"], "linf-fast");
    assert_eq!(out["certificates"]["witnesses"].as_array().unwrap().len(), 5);
}

#[test]
fn l1_plane_is_anti_but_not_strongly() {
    let (code, out) = run(
        &["classify", "--space", L1_3, "--basis", "[[0,1,1],[-1,0,1]]", "--verify"],
        None,
    );
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["anti"], "yes");
    assert_eq!(out["strongly_anti"], "no");
    assert_eq!(out["engine"], "l1-fast");
    assert_eq!(out["verify"]["strongly_anti"], "no");
    assert!(out.get("discrepancies").is_none());
}

#[test]
fn verify_agrees_on_linf_examples() {
    let (code, out) = run(&["classify", "--space", LINF5, "--basis", LINF5_BASIS, "--verify"], None);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["verify"]["strongly_anti"], "yes");
    let (code, out) = run(
        &["classify", "--space", LINF3, "--basis", "[[1,1,2],[2,2,1]]", "--verify"],
        None,
    );
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["anti"], "no");
    assert_eq!(out["certificates"]["reason"]["clause"], "p_clause");
    assert_eq!(out["verify"]["strongly_anti"], "no");
}

#[test]
fn lines_are_never_anti() {
    let (code, out) = run(
        &["classify", "--space", PRISM, "--basis", "[[1,2,3]]", "--verify"],
        None,
    );
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["anti"], "no");
    assert_eq!(out["verify"]["best_coapprox"], true);
}

#[test]
fn generic_classification_of_custom_space() {
    let (code, out) = run(
        &["classify", "--space", PRISM, "--basis", "[[1,0,0],[0,1,0]]", "--seed", "7"],
        None,
    );
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["engine"], "generic");
    assert_eq!(out["anti"], "no");
    assert_eq!(out["strongly_anti"], "no");
}

#[test]
fn request_from_stdin() {
    let request = json!({
        "command": "eps-check",
        "space": { "type": "linf", "n": 3 },
        "subspace": { "basis": [[1, 0, 0], [0, 1, 0]] },
        "points": [[0, 0, 1]],
        "y0": ["1/2", 0, 0],
        "epsilon": "1/2",
    });
    let (code, out) = run(&[], Some(&request.to_string()));
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["command"], "eps-check");
    assert_eq!(out["eps_best"], true);
    assert_eq!(out["defect"], "1/2");

    let (code, out) = run(&["defect"], Some(&request.to_string()));
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["defect"], "1/2");
}

#[test]
fn rationals_round_trip() {
    let (code, out) = run(
        &["best-coapprox", "--space", L1_3, "--basis", "[[0,1,1],[-1,0,1]]", "--point", "[\"1/3\",2,-5]", "--verify"],
        None,
    );
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["engine"], "l1-fast");
    assert_eq!(out["result"]["status"], "not_exists");

    let plane = "[[1,0,\"2/3\"],[0,1,\"-1/5\"]]";
    let x = "[\"1/3\",2,\"-5/7\"]";
    let (code, out) = run(&["best-coapprox", "--space", LINF3, "--basis", plane, "--point", x], None);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["result"]["status"], "exists");
    let y0 = out["result"]["y0"].to_string();
    let (code, check) = run(&["defect", "--space", LINF3, "--basis", plane, "--point", x, "--y0", &y0], None);
    assert_eq!(code, 0, "{check}");
    assert_eq!(check["defect"], "0");
    assert_eq!(check["best"], true);
}

#[test]
fn orthogonality_commands() {
    let (code, out) = run(&["bj", "--space", LINF3, "--point", "[1,1,0]", "--point", "[1,-1,0]", "--verify"], None);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["orthogonal"], true);
    let (_, out) = run(&["bj", "--space", LINF3, "--point", "[1,0,0]", "--point", "[1,1,0]"], None);
    assert_eq!(out["orthogonal"], false);
    let (_, out) = run(
        &["eps-bj", "--space", LINF3, "--point", "[1,0,0]", "--point", "[1,2,0]", "--epsilon", "1/2"],
        None,
    );
    assert_eq!(out["orthogonal"], true);
    let (_, out) = run(&["jset", "--space", LINF3, "--point", "[2,-2,1]"], None);
    let functionals = out["functionals"].as_array().unwrap();
    assert_eq!(functionals.len(), 2);
    assert!(functionals.contains(&json!(["1", "0", "0"])));
    assert!(functionals.contains(&json!(["0", "-1", "0"])));
    let (_, out) = run(&["smooth", "--space", LINF3, "--point", "[2,1,1]"], None);
    assert_eq!(out["smooth"], true);
}

#[test]
fn structural_commands() {
    let (_, out) = run(&["facets", "--space", L1_3], None);
    assert_eq!(out["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(out["facets"].as_array().unwrap().len(), 8);

    let (_, out) = run(&["norming-set", "--space", L1_3, "--basis", "[[0,1,1],[-1,0,1]]"], None);
    assert_eq!(out["size"], 6);
    assert_eq!(out["bound"], 6);
    assert_eq!(out["representatives"], json!([["1", "1", "1"], ["1", "1", "-1"], ["1", "-1", "-1"]]));

    let (_, out) = run(&["star-property", "--space", LINF3, "--basis", "[[3,0,2],[0,3,2]]", "--index", "2"], None);
    assert_eq!(out["star"]["result"], "holds");
    let (_, out) = run(&["star-property", "--space", LINF3, "--basis", "[[3,0,2],[0,3,2]]"], None);
    assert_eq!(out["components"].as_array().unwrap().len(), 3);

    let (_, out) = run(&["jy", "--space", L1_3, "--basis", "[[0,1,1],[-1,0,1]]"], None);
    assert_eq!(out["rank"], 3);
    assert_eq!(out["indices"].as_array().unwrap().len(), 6);
}

#[test]
fn errors_are_structured() {
    let (code, out) = run(&["norm", "--space", LINF3, "--point", "[1,2]"], None);
    assert_eq!(code, 1);
    assert_eq!(out["error"]["kind"], "dimension_mismatch");

    let (code, out) = run(&["norm", "--space", "{\"type\":\"l2\",\"n\":3}", "--point", "[1,2,3]"], None);
    assert_eq!(code, 1);
    assert_eq!(out["error"]["kind"], "invalid_request");

    let (code, out) = run(&["frobnicate"], None);
    assert_eq!(code, 1);
    assert_eq!(out["error"]["kind"], "invalid_arguments");

    let (code, out) = run(&["eps-bj", "--space", LINF3, "--point", "[1,0,0]", "--point", "[0,1,0]", "--epsilon", "1"], None);
    assert_eq!(code, 1);
    assert_eq!(out["error"]["kind"], "epsilon_out_of_range");

    let (code, out) = run(&["norming-set", "--space", LINF3, "--basis", "[[1,0,0],[0,1,0]]"], None);
    assert_eq!(code, 1);
    assert_eq!(out["error"]["kind"], "invalid_request");

    let (code, out) = run(&[], Some("{not json"));
    assert_eq!(code, 1);
    assert_eq!(out["error"]["kind"], "invalid_request");
}

#[test]
fn budget_exhaustion_exits_with_two() {
    let args = ["best-coapprox", "--space", PRISM, "--basis", "[[1,1,0],[0,1,1]]", "--point", "[1,0,0]"];
    let (code, out) = run(&[&args[..], &["--budget", "0"]].concat(), None);
    assert_eq!(code, 2);
    assert_eq!(out["error"]["kind"], "budget_exceeded");
    let (code, out) = run(&args, None);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn pretty_output_is_text() {
    let out = Command::new(env!("CARGO_BIN_EXE_coapprox"))
        .args(["norm", "--space", LINF3, "--point", "[3,0,2]", "--pretty"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "command: norm\nnorm: 3\n");
}
