use std::process::{Command, Output};

use serde_json::Value;

fn engel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_engel")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().next().expect("one report line")).expect("valid json")
}

#[test]
fn help_exits_zero() {
    let out = engel(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify"));
}

#[test]
fn sl2_v4_fails_with_witness() {
    let out = engel(&["--format", "json", "lie", "identity", "--builtin", "sl2", "--seq", "v", "--n", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["verdict"], "fails");
    assert_eq!(r["witness"]["x"]["expr"], "e_+");
    assert_eq!(r["witness"]["y"]["expr"], "e_-");
    for key in ["claim", "inputs", "verdict", "witness", "iterations", "millis", "config"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn baer_on_s4() {
    let out = engel(&["group", "engel-set", "--builtin", "sym:4", "--seq", "e", "--compare", "fitting"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(engel(&["lie", "identity", "--builtin", "nope", "--seq", "v", "--n", "2"]).status.code(), Some(2));
    assert_eq!(engel(&["group", "frobnicate"]).status.code(), Some(2));
    assert_eq!(engel(&["verify", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn experimental_verdicts_are_flagged() {
    let out = engel(&["--format", "json", "--no-timing", "verify", "conjecture-radical"]);
    let r = json(&out);
    let verdict = r["verdict"].as_str().unwrap();
    assert!(verdict.starts_with("experimental-"), "{verdict}");
    assert_eq!(out.status.code(), Some(if verdict == "experimental-pass" { 0 } else { 1 }));
    assert!(r["witness"].is_null());
}

#[test]
fn words_and_seeds() {
    let out = engel(&["--format", "json", "words", "autocorrect", "--seq", "u-bggkpp", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = engel(&["--format", "json", "words", "correct", "--seq", "s-bww", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));

    let run = |seed: &str| engel(&["--seed", seed, "--no-timing", "--format", "json", "verify", "thm-cl"]).stdout;
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}

#[test]
fn file_round_trip() {
    let dir = std::env::temp_dir().join(format!("engel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q8.json");
    let out = engel(&["group", "export", "--builtin", "q8"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&path, &out.stdout).unwrap();
    let out = engel(&["--format", "json", "group", "info", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["details"]["order"], 8);
    std::fs::remove_dir_all(&dir).ok();
}
