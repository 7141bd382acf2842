use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn xi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xi-workbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

fn strip_timing(mut v: Value) -> Value {
    v["duration_ms"] = json!(0);
    v
}

#[test]
fn window_check_is_nine_lines() {
    let out = xi(&["xi", "check", "--window", "-5..5", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().all(|l| l.starts_with("PASS")));

    let r = report(&xi(&["xi", "check", "--window", "-5..5"]));
    assert_eq!(r["status"], "pass");
    let opens = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "open count").unwrap();
    assert_eq!(opens["detail"]["opens"], 2049);
}

#[test]
fn integer_counterexample() {
    let out = xi(&["riesz", "counterexample", "--delta", "Z"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 6);
    for c in &checks[..5] {
        assert_eq!(c["detail"]["result"], Value::Null);
        assert!(c["detail"]["transcript"].is_object());
    }
}

#[test]
fn interpolate_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let e = |c: &str, dev: Value| json!({"constant": c, "dev": dev});
    let problem = json!({
        "rho": [e("1", json!({})), e("1", json!({"0": "-1", "1": "1"}))],
        "sigma": [e("2", json!({})), e("2", json!({"0": "-1", "1": "1"}))],
    });
    let input = write(dir.path(), "p.json", &problem);
    let r = report(&xi(&["riesz", "interpolate", "--input", &input]));
    assert_eq!(r["status"], "pass");
    assert_eq!(r["checks"][0]["detail"]["t"], "4/3");

    let out = xi(&["riesz", "interpolate", "--input", &input, "--delta", "Z"]);
    assert_eq!(out.status.code(), Some(1));

    let out = xi(&["riesz", "search", "--input", &input, "--delta", "Z", "--window", "-2..2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["checks"][0]["detail"]["result"], Value::Null);
}

#[test]
fn tree_claims() {
    let out = xi(&["tree", "verify", "--n", "0", "--depth", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["status"], "pass");
}

#[test]
fn bundle_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let p = path.to_str().unwrap();
    let out = xi(&["tree", "build", "--n", "0", "--depth", "2", "--seed", "4", "--bundle", p]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(xi(&["tree", "verify-bundle", "--bundle", p]).status.code(), Some(0));

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["pieces"][10]["offset"][1] = json!("1/3");
    let bad = write(dir.path(), "bad.json", &v);
    assert_eq!(xi(&["tree", "verify-bundle", "--bundle", &bad]).status.code(), Some(1));
}

#[test]
fn transversal_sample_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let input = json!({
        "base": {"origin": ["0", "0", "0", "0"], "images": [["1/2", "0", "0", "0"]], "n": 2},
        "subspaces": [{"point": ["0", "0", "0", "0"], "directions": [["0", "0", "1", "0"]]}],
    });
    let inp = write(dir.path(), "t.json", &input);
    let rep = dir.path().join("rep.json");
    let out = xi(&["transversal", "sample", "--input", &inp, "--seed", "9", "--out", rep.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let out = xi(&["transversal", "verify", "--input", rep.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // η = h(0) lies in K
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    let mut cert = r["checks"][0]["detail"]["certificate"].clone();
    cert["witness"]["eta"] = json!([["0", "0", "0", "0"]]);
    cert["pass"] = json!(false);
    let c = write(dir.path(), "c.json", &cert);
    assert_eq!(xi(&["transversal", "verify", "--input", &c]).status.code(), Some(1));
}

#[test]
fn sweeps_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for (i, threads) in ["1", "4"].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_xi-workbench"))
            .args(["sweep", "pc-certify", "--depth", "2", "--pairs", "2000", "--seed", "5", "--out"])
            .arg(&path)
            .env("XI_WORKBENCH_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        runs.push(strip_timing(serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()));
    }
    assert_eq!(runs[0], runs[1]);

    let a = strip_timing(report(&xi(&["sweep", "riesz-oracle", "--cases", "100", "--oracle-cases", "20", "--seed", "1"])));
    let b = strip_timing(report(&xi(&["sweep", "riesz-oracle", "--cases", "100", "--oracle-cases", "20", "--seed", "1"])));
    assert_eq!(a, b);
    assert_eq!(a["status"], "pass");
    assert_eq!(report(&xi(&["sweep", "topology-small"]))["status"], "pass");
}

#[test]
fn actions() {
    let out = xi(&["xi", "minimality", "--window", "-10..10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["checks"][0]["detail"]["status"], "verified");

    let dir = tempfile::tempdir().unwrap();
    let trivial = write(dir.path(), "a.json", &json!({"presentation": {"kind": "integers"}, "generators": [{"kind": "identity"}]}));
    let out = xi(&["xi", "minimality", "--window", "-3..3", "--action", &trivial]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["checks"][0]["detail"]["witness"]["points"], json!([-3]));

    let out = xi(&["xi", "effective", "--window", "0..3", "--word", "1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(xi(&["xi", "check", "--window", "3..1"]).status.code(), Some(2));
    assert_eq!(xi(&["xi", "check", "--window", "a..b"]).status.code(), Some(2));
    assert_eq!(xi(&["riesz", "interpolate", "--input", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(xi(&["sweep", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(xi(&["riesz", "counterexample", "--delta", "R"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("g.json");
    std::fs::write(&garbage, "{not json").unwrap();
    let out = xi(&["tree", "verify-bundle", "--bundle", garbage.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_xi-workbench"))
        .args(["xi", "check", "--window", "0..1"])
        .env("XI_WORKBENCH_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
