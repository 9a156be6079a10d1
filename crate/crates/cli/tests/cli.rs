use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hyperwz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperwz")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn list_shows_every_builtin() {
    let o = hyperwz(&["list"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for name in ["kummer", "bailey", "dixon", "gauss", "dixon_4f3", "dixon_5f4"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from\n{text}");
    }
    let o = hyperwz(&["list", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 6);
    assert_eq!(entries[0]["shape"], "2F1");
    assert_eq!(entries[5]["shape"], "5F4");
}

#[test]
fn prove_kummer_text_and_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kummer.json");
    let o = hyperwz(&["prove", "kummer", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("Re(b) < 0 -> Re(b) < 1"), "{text}");
    assert!(text.trim_end().ends_with("proved under Re(b) < 1"));

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["verdict"]["result"], "proved");
    assert_eq!(doc["steps"][0]["step"], "shift");
    let o = hyperwz(&["replay", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn prove_without_extension_keeps_the_proved_region() {
    let o = hyperwz(&["prove", "kummer", "--no-extend"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with("proved under Re(b) < 0"));
    let o = hyperwz(&["prove", &data("kummer_theorem.json"), "--extend", "b"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with("proved under Re(b) < 1"));
}

#[test]
fn prove_json_is_a_transcript() {
    let o = hyperwz(&["prove", "dixon", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["theorem"]["name"], "dixon");
    assert_eq!(v["verdict"]["conditions"][0], "Re(2+a-2b-2c) > 0");
}

#[test]
fn tampered_transcript_is_rejected() {
    let o = hyperwz(&["prove", "bailey", "--json"]);
    let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let steps = v["steps"].as_array_mut().unwrap();
    let wz = steps.iter_mut().find(|s| s["step"] == "wz").unwrap();
    wz["certificate"] = Value::from("-2*k/(b+2*n+k+1)");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(code(&hyperwz(&["replay", path.to_str().unwrap()])), 1);

    std::fs::write(&path, "{\"theorem\": 3}").unwrap();
    assert_eq!(code(&hyperwz(&["replay", path.to_str().unwrap()])), 2);
}

#[test]
fn verify_exit_codes() {
    let o = hyperwz(&["verify", &data("dixon_verify.json")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&hyperwz(&["verify", &data("dixon_tampered.json")])), 1);
    assert_eq!(code(&hyperwz(&["verify", &data("missing_shift.json")])), 2);
    assert_eq!(code(&hyperwz(&["verify", &data("does_not_exist.json")])), 2);
}

#[test]
fn check_samples_and_points() {
    let o = hyperwz(&["check", "kummer", "--samples", "2", "--seed", "4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = hyperwz(&["check", "gauss", "--at", "a=-3,b=1,c=5", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let exact = v["records"].as_array().unwrap().iter().find(|r| r["check"] == "identity (exact)").unwrap();
    assert_eq!(exact["lhs"], "4/7");
    assert_eq!(exact["rhs"], "4/7");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&hyperwz(&["prove", "no_such_theorem"])), 2);
    assert_eq!(code(&hyperwz(&["prove", "kummer", "--extend", "k"])), 2);
    assert_eq!(code(&hyperwz(&["prove", "kummer", "--extend", "b", "--no-extend"])), 2);
    assert_eq!(code(&hyperwz(&["check", "kummer", "--bits", "16"])), 2);
    assert_eq!(code(&hyperwz(&["check", "gauss", "--at", "a=x"])), 2);
    assert_eq!(code(&hyperwz(&["frobnicate"])), 2);
}
