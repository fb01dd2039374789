use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistzeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_file(name: &str, body: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("twistzeta-{}-{}.json", std::process::id(), name));
    std::fs::File::create(&path)
        .unwrap()
        .write_all(body.as_bytes())
        .unwrap();
    path
}

#[test]
fn pipeline_on_quaternions() {
    let out = run(&["pipeline", "--corpus", "q8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema"], "twistzeta/1");
    assert_eq!(v["zeta"]["display"], "1 + 2^-s");
    assert_eq!(v["zeta"]["agree"], true);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
    assert_eq!(v["group"]["normal"]["order"], 2);
}

#[test]
fn pipeline_on_a_group_file() {
    let path = temp_file(
        "heis",
        r#"{"perm_gens": [[[1,2,3],[4,5,6],[7,8,9]], [[2,5,8],[3,9,6]]], "points": 9}"#,
    );
    let out = run(&[
        "pipeline",
        "--group",
        path.to_str().unwrap(),
        "--normal",
        "(1 4 7)(2 5 8)(3 6 9)",
    ]);
    let v = json_of(&out);
    assert_eq!(out.status.code(), Some(0), "{}", v);
    assert_eq!(v["group"]["order"], 27);
    assert_eq!(v["group"]["prime"], 3);
    assert_eq!(v["zeta"]["display"], "1 + 2*3^-s");
}

#[test]
fn output_does_not_depend_on_threads() {
    let a = run(&["pipeline", "--corpus", "sl23", "--jobs", "1"]);
    let b = run(&["pipeline", "--corpus", "sl23", "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["invariants", "--corpus", "heis27-self", "--jobs", "1"]);
    let b = run(&["invariants", "--corpus", "heis27-self", "--jobs", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn non_normal_subgroup_is_rejected() {
    let path = temp_file(
        "s3",
        r#"{"perm_gens": [[[1,2,3]], [[1,2]]], "points": 3, "normal": ["(1 2)"]}"#,
    );
    let out = run(&["pipeline", "--group", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["code"], "N_NOT_NORMAL");
}

#[test]
fn non_p_subgroup_is_rejected() {
    let out = run(&[
        "pipeline",
        "--corpus",
        "s4",
        "--normal",
        "(1 2 3),(1 2)(3 4)",
        "--prime",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["code"], "N_NOT_P_GROUP");
    let out = run(&["pipeline", "--corpus", "s3", "--normal", "(1 2 3)", "--prime", "2"]);
    assert_eq!(json_of(&out)["error"]["code"], "N_NOT_P_GROUP");
}

#[test]
fn input_errors() {
    let out = run(&["pipeline", "--corpus", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["code"], "INPUT");
    let out = run(&["pipeline", "--group", "/definitely/not/here.json"]);
    assert_eq!(json_of(&out)["error"]["code"], "IO");
    let broken = temp_file("broken", r#"{"table": [[0,1],[0,1]]}"#);
    let out = run(&["chartab", "--group", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["pipeline"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chartab_and_twist() {
    let v = json_of(&run(&["chartab", "--corpus", "s4"]));
    let degrees: Vec<u64> = v["G"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["degree"].as_u64().unwrap())
        .collect();
    assert_eq!(degrees, vec![1, 1, 2, 3, 3]);
    assert_eq!(v["N"]["order"], 4);
    let v = json_of(&run(&["twist", "--corpus", "d4"]));
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_one_entry_and_write_to_file() {
    let out_path = std::env::temp_dir().join(format!("twistzeta-{}-verify.json", std::process::id()));
    let out = run(&["verify", "--corpus", "d4", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 1);
}
