use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn awskein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_awskein")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("awskein-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn golden(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn read_json(p: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

/// Timings are the only nondeterministic field.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("timing_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn normal_form_command() {
    let o = awskein(&["normal-form", "S23*S12"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "s1*s3 + q*D123 + q^-1*S13 + s2*S123");
    assert_eq!(stdout(&awskein(&["normal-form", "S1"])), "s1");
    let o = awskein(&["normal-form", "S12*+"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte"));
}

#[test]
fn hilbert_routes_and_golden_json() {
    let o = awskein(&["hilbert", "--n", "4", "--tmax", "3"]);
    assert_eq!(stdout(&o), "1 4 16 48");
    let closed = stdout(&awskein(&["hilbert", "--n", "4", "--tmax", "12"]));
    assert_eq!(stdout(&awskein(&["hilbert", "--n", "4", "--tmax", "12", "--route", "enumerated"])), closed);
    assert_eq!(
        stdout(&awskein(&["hilbert", "--n", "3", "--tmax", "10", "--route", "character"])),
        stdout(&awskein(&["hilbert", "--n", "3", "--tmax", "10"]))
    );
    let p = scratch("hilbert.json");
    assert!(awskein(&["hilbert", "--n", "4", "--tmax", "12", "--json", p.to_str().unwrap()]).status.success());
    assert_eq!(read_json(&p), golden("hilbert_n4.json"));
}

#[test]
fn braid_command_matches_golden() {
    let p = scratch("braid.json");
    let o = awskein(&["braid", "--word", "1 2 1", "--apply", "S134", "--json", p.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(read_json(&p), golden("braid_121_s134.json"));
    assert_eq!(stdout(&awskein(&["braid", "--word", "1", "--apply", "S1"])), "s2");
    assert_eq!(awskein(&["braid", "--word", "4", "--apply", "S1"]).status.code(), Some(2));
}

#[test]
fn verify_report_matches_golden() {
    let p = scratch("rea.json");
    let o = awskein(&["verify", "rea", "--json", p.to_str().unwrap()]);
    assert!(o.status.success());
    let (mut got, mut want) = (read_json(&p), golden("verify_rea.json"));
    strip_timing(&mut got);
    strip_timing(&mut want);
    assert_eq!(got, want);
    assert_eq!(awskein(&["verify", "everything"]).status.code(), Some(2));
}

#[test]
fn rules_export_round_trips_and_failures_exit_with_one() {
    let p = scratch("rules.json");
    assert!(awskein(&["rules", "export", "--out", p.to_str().unwrap()]).status.success());
    let q = scratch("rules2.json");
    let o = awskein(&["verify", "compat", "--rules", p.to_str().unwrap(), "--sample", "50", "--export-rules", q.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&p).unwrap(), std::fs::read_to_string(&q).unwrap());

    // Perturb one coefficient: the system stays well-formed but loses confluence.
    let mut v = read_json(&p);
    let rules = v["rules"].as_array_mut().unwrap();
    let r = rules.iter_mut().find(|r| r["rhs"].as_array().unwrap().len() > 2).unwrap();
    r["rhs"][0]["coeff"][0]["coeff"] = Value::String("7".into());
    let bad = scratch("bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let j = scratch("bad-report.json");
    let o = awskein(&["verify", "confluence", "--rules", bad.to_str().unwrap(), "--json", j.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let rep = read_json(&j);
    assert_eq!(rep["status"], "fail");
    assert!(!rep["checks"][0]["details"].as_array().unwrap().is_empty());
}
