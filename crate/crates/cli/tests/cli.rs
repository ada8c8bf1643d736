use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_argq")).args(args).env_remove("ARGQ_LIMITS").output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn two_cycle_labellings() {
    let out = stdout(&["frame", "ext", &fixture("twocycle.af")]);
    assert!(out.starts_with("3 labelling(s)\n"));
    for l in ["{a=0, b=1}", "{a=½, b=½}", "{a=1, b=0}"] {
        assert!(out.contains(l), "missing {l} in {out}");
    }
}

#[test]
fn json_entries() {
    let out = stdout(&["--json", "frame", "grounded", &fixture("twocycle.af")]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let first = &v[0];
    assert_eq!(first.as_array().unwrap().len(), 2);
    assert_eq!(first[0]["node"], "a");
}

#[test]
fn pipeline_on_mutual_loop() {
    let out = stdout(&["inst", "pipeline", &fixture("loop.af")]);
    assert!(out.starts_with("2 extension(s)\n"));
    assert!(out.contains("{T(d)=0, T(l)=1}"));
    assert!(out.contains("{T(d)=½, T(l)=½}"));
}

#[test]
fn oracle_on_conjunction_chain() {
    let out = stdout(&["--json", "inst", "oracle", &fixture("conj.af")]);
    let v: Value = serde_json::from_str(&out).unwrap();
    for pair in v.as_array().unwrap() {
        let lab: Vec<(&str, &str)> = pair["labelling"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| (e["node"].as_str().unwrap(), e["value"].as_str().unwrap()))
            .collect();
        assert_eq!(lab[0].0, "x");
        assert_ne!(lab[0].1, lab[1].1);
    }
}

#[test]
fn topnet_options() {
    let iv = stdout(&["topnet", "ext", &fixture("tf7.af")]);
    assert!(iv.contains("{TOP=1, a=0, b=1, x=1, y=1, z=0}"));
    let strict = stdout(&["topnet", "ext", "--policy", "strict", &fixture("tf7.af")]);
    assert!(strict.starts_with("0 labelling(s)"));
}

#[test]
fn np_stable() {
    let out = stdout(&["cd", "np", "--stable", &fixture("selfset.af")]);
    assert!(out.starts_with("2 labelling(s)\n"));
}

#[test]
fn defeasible_ground() {
    let out = stdout(&["defeasible", "ground", &fixture("ee1.dl")]);
    let first = out.lines().next().unwrap();
    for n in ["TOP=1", "a=1", "b=1", "c=1", "d=1", "e=1", "f=1", "g=1", "~g=0"] {
        assert!(first.contains(n), "missing {n} in {first}");
    }
}

#[test]
fn dot_export() {
    let out = stdout(&["export", "dot", &fixture("tf7.af")]);
    assert!(out.starts_with("digraph G {\n") && out.ends_with("}\n"));
    assert!(out.contains("\"TOP\" [shape=doublecircle"));
    assert_eq!(out.matches(" -> ").count(), 7);
}

#[test]
fn parse_error_exit_code() {
    let out = run(&["frame", "ext", &fixture("bad.af")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn limit_exit_code() {
    let out = Command::new(env!("CARGO_BIN_EXE_argq"))
        .args(["baf", "build", "p & q"])
        .env("ARGQ_LIMITS", "dnf_atoms=1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_file_is_a_general_error() {
    let out = run(&["frame", "ext", &fixture("absent.af")]);
    assert_eq!(out.status.code(), Some(1));
}
