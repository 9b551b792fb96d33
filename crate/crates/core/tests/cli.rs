use std::path::Path;
use std::process::{Command, Output};

use oske::model::{replay, Transcript};

fn oske(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oske")).args(args).env_remove("OSKE_GRID_D").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert_eq!(out.status.code(), Some(0), "{}", stderr(out));
    serde_json::from_str(&stdout(out)).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn ratio_command() {
    let v = json(&oske(&["ratio", "--delta", "0.25", "--json"]));
    assert_eq!(v["c"], 4.0);
    assert_eq!(v["kappa_floor"], 4);

    let v = json(&oske(&["ratio", "--delta", "0.1", "--removable", "--mode", "multiplicative", "--json"]));
    assert!((v["x_add"].as_f64().unwrap() - 1.8 / 2.8).abs() < 1e-12);
    assert!(v["delta_star_mult"].as_f64().is_some());

    let text = oske(&["ratio", "--delta", "0.25"]);
    assert!(stdout(&text).lines().any(|l| l.starts_with("c ") && l.ends_with("4.0")));

    assert_eq!(oske(&["ratio", "--delta", "0.6"]).status.code(), Some(2));
    assert_eq!(oske(&["ratio", "--delta", "0.1", "--mode", "multiplicative"]).status.code(), Some(2));
    assert_eq!(oske(&["ratio", "--delta", "abc"]).status.code(), Some(2));
    assert_eq!(oske(&["ratio"]).status.code(), Some(2));
}

#[test]
fn duel_command_writes_a_replayable_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let p = path.to_str().unwrap();
    let v = json(&oske(&[
        "duel", "--adv", "noncomp", "--alg", "blind-greedy", "--delta", "0.5", "--epsilon", "0.01", "--transcript", p,
    ]));
    assert!((v["ratio"].as_f64().unwrap() - 99.5).abs() < 1e-9);
    assert_eq!(v["case"], "1");

    let t = Transcript::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(replay(&t).unwrap(), t.final_gain);
    t.audit().unwrap();

    let v = json(&oske(&["duel", "--adv", "noncomp", "--alg", "reject-all", "--delta", "0.5"]));
    assert_eq!(v["ratio"], "inf");

    let v = json(&oske(&["duel", "--adv", "p", "--alg", "alg2", "--delta", "0.05", "--transcript", p]));
    let t = Transcript::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(replay(&t).unwrap(), v["final_gain"].as_f64().unwrap());
    assert_eq!(t.reveals.len(), 103);

    assert_eq!(oske(&["duel", "--adv", "nope", "--alg", "alg1", "--delta", "0.1"]).status.code(), Some(2));
    assert_eq!(oske(&["duel", "--adv", "p", "--alg", "alg1", "--delta", "0.3", "--epsilon", "0.03"]).status.code(), Some(2));
    assert_eq!(oske(&["duel", "--adv", "p", "--alg", "alg3", "--delta", "0.1"]).status.code(), Some(2));
}

#[test]
fn sweep_command() {
    let out = oske(&["sweep", "--from", "0.01", "--to", "0.49", "--step", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("delta,p,q,c,greedy_bound,removability_ratio"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 49);
    assert!(rows.iter().all(|r| r[3] >= 2.0));
    assert_eq!(csv, stdout(&oske(&["sweep", "--from", "0.01", "--to", "0.49", "--step", "0.01"])));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = oske(&["sweep", "--from", "0.1", "--to", "0.2", "--step", "0.05", "--measure", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("delta,p,q,c,greedy_bound,removability_ratio,measured_ratio_alg2,measured_ratio_alg3\n"));
    assert_eq!(written.lines().count(), 4);

    assert_eq!(oske(&["sweep", "--from", "0.3", "--to", "0.6"]).status.code(), Some(2));
}

#[test]
fn run_and_opt_commands() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.json",
        r#"{ "mode": "additive", "delta": 0.1, "items": [
            { "announced": 0.3, "actual": 0.38 },
            { "announced": 0.5, "actual": 0.55 } ] }"#,
    );
    let v = json(&oske(&["run", "--instance", &good, "--alg", "alg2"]));
    assert!((v["final_gain"].as_f64().unwrap() - 0.93).abs() < 1e-12);
    assert_eq!(v["policy"], "alg2");

    let v = json(&oske(&["opt", "--instance", &good]));
    assert!((v["value"].as_f64().unwrap() - 0.93).abs() < 1e-12);
    assert_eq!(v["method"], "brute");

    let malformed = write(dir.path(), "bad.json", "{\n  \"mode\": \"additive\",\n  \"delta\": ,\n}");
    let out = oske(&["run", "--instance", &malformed, "--alg", "alg1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let outside = write(
        dir.path(),
        "band.json",
        r#"{ "mode": "additive", "delta": 0.1, "items": [ { "announced": 0.3, "actual": 0.5 } ] }"#,
    );
    assert_eq!(oske(&["run", "--instance", &outside, "--alg", "alg1"]).status.code(), Some(2));
    assert_eq!(oske(&["run", "--instance", "/nonexistent.json", "--alg", "alg1"]).status.code(), Some(2));
}

#[test]
fn grid_from_environment() {
    let bad = Command::new(env!("CARGO_BIN_EXE_oske"))
        .args(["ratio", "--delta", "0.25"])
        .env("OSKE_GRID_D", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));

    // ε = 0.0005 is not a multiple of 1/1000
    let coarse = Command::new(env!("CARGO_BIN_EXE_oske"))
        .args(["duel", "--adv", "noncomp", "--alg", "take-first", "--delta", "0.5", "--epsilon", "0.0005"])
        .env("OSKE_GRID_D", "1000")
        .output()
        .unwrap();
    assert_eq!(coarse.status.code(), Some(2));
    let fine = oske(&["duel", "--adv", "noncomp", "--alg", "take-first", "--delta", "0.5", "--epsilon", "0.0005"]);
    assert_eq!(fine.status.code(), Some(0));
}
