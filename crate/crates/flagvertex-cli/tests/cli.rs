//! End-to-end tests of the `flagvertex` binary.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagvertex"))
        .args(args)
        .env_remove("FLAGVERTEX_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("output file")).expect("valid json")
}

#[test]
fn trs_eigen_on_tp1_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["check", "trs-eigen", "--quiver", r#"{"v":[1],"w":2}"#, "--r", "1", "--order", "6", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out);
    assert_eq!(r["status"], "PASS");
    assert_eq!(r["seed"], 0);
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn xxz_hamfirst_ii_passes() {
    let o = run(&["check", "xxz", "--identity", "hamfirst-ii", "--n", "2", "--w", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["status"], "PASS");
}

#[test]
fn corrupted_insertion_fails_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("qkz.json");
    let bad = r#"{"lambda1":"3","mu1":"0","lambda2":"-6","mu2":"3","constant":"1"}"#;
    let o = run(&["check", "qkz-trs-sum", "--order", "8", "--insertions", bad, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let r = json(&out);
    assert_eq!(r["status"], "FAIL");
    assert!(!r["residuals"].as_array().unwrap().is_empty());

    let good = run(&["check", "qkz-trs-sum", "--order", "8"]);
    assert_eq!(code(&good), 0);
}

#[test]
fn unknown_command_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.json");
    let o = run(&["frobnicate", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(code(&run(&["vertex", "--params", "{not json"])), 2);
    assert_eq!(code(&run(&["check", "xxz", "--identity", "no-such-identity"])), 2);
    assert_eq!(code(&run(&["vertex", "--order", "1,2,3"])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_flagvertex"))
        .args(["check", "calibrate"])
        .env("FLAGVERTEX_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn genericity_and_limit_failures_exit_3() {
    let resonant = r#"{"q_half":"1/2","h_half":"1/3","a":["2","8"]}"#;
    assert_eq!(code(&run(&["vertex", "--params", resonant, "--order", "2"])), 3);
    assert_eq!(code(&run(&["toda-limit", "--convention", "z", "--order", "1"])), 3);
}

#[test]
fn vertex_output_is_deterministic_and_hashed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let params = r#"{"q_half":"1/2","h_half":"1/3","a":["2","3"]}"#;
    for p in [&a, &b] {
        let o = run(&["vertex", "--params", params, "--order", "3", "--convention", "z", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v = json(&a);
    let pts = v["results"]["points"].as_array().unwrap();
    assert_eq!(pts.len(), 2);
    let d1 = pts[0]["series"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["deg"] == serde_json::json!([1]))
        .unwrap();
    assert_eq!(d1["coeff"], "8/9");

    let c = dir.path().join("c.json");
    run(&["vertex", "--params", params, "--order", "3", "--seed", "5", "--out", c.to_str().unwrap()]);
    assert_ne!(json(&c)["config_hash"], v["config_hash"]);
}

#[test]
fn toda_limit_zh_coefficient() {
    let params = r#"{"q_half":"1/2","h_half":"1/3","a":["2","3"]}"#;
    let o = run(&["toda-limit", "--params", params, "--order", "1", "--point", "0"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let terms = v["results"]["points"][0]["series"]["terms"].as_array().unwrap().clone();
    assert!(terms.iter().any(|t| t["deg"] == serde_json::json!([1]) && t["coeff"] == "1/5"));
}

#[test]
fn bethe_commands() {
    assert_eq!(code(&run(&["check", "bethe", "--identity", "closed-form"])), 0);
    assert_eq!(code(&run(&["check", "bethe", "--identity", "closed-form-literal"])), 1);
    let o = run(&["bethe-solve", "--params", r#"{"hbar":"9/4","a":["2","3"],"zeta":["1","5"]}"#, "--weight", "1,1", "--precision", "30"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let block = &v["results"]["blocks"][0];
    assert_eq!(block["found"], 2);
    assert_eq!(block["block_dim"], 2);
    let o = run(&["check", "bethe", "--w", "2", "--precision", "40"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn lemma_and_calibrate_checks() {
    assert_eq!(code(&run(&["check", "lemma"])), 0);
    assert_eq!(code(&run(&["check", "lemma", "--identity", "level-growth-literal"])), 1);
    let o = run(&["check", "calibrate"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("sigma_pref = 1, sigma_int = -1"));
}
