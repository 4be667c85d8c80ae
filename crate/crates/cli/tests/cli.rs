use std::path::PathBuf;
use std::process::{Command, Output};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn klr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klr")).args(args).env("KLR_THREADS", "2").output().unwrap()
}

fn cfg(name: &str) -> String {
    configs().join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn normalize_examples() {
    let a1 = cfg("a1.json");
    let o = klr(&["--config", &a1, "normalize", "--expr", "psi1*x1*e(1,1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("x2*psi1*e(1,1) + e(1,1)"));
    let o = klr(&["--config", &a1, "normalize", "--expr", "psi1*psi1*e(1,1)"]);
    assert_eq!(stdout(&o).lines().next(), Some("0"));
}

#[test]
fn parse_error_is_positioned() {
    let o = klr(&["--config", &cfg("a1.json"), "normalize", "--expr", "psi * e(1)"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("byte 4"), "{err}");
    assert!(err.lines().any(|l| l.trim_end().ends_with('^')));
}

#[test]
fn exit_codes() {
    assert_eq!(klr(&["--config", "/nonexistent.json", "en", "--n", "2", "--label", "1"]).status.code(), Some(3));
    assert_eq!(klr(&["frobnicate"]).status.code(), Some(2));
    let o = klr(&["--config", &cfg("a2.json"), "dim", "--left", "1", "--right", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    // r = 2 keeps e_2 a multiple of an idempotent but not one
    let dir = std::env::temp_dir().join(format!("klr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("r2.json");
    std::fs::write(&p, r#"{"labels":["1"],"bilinear":[[2]],"params":{"r":{"1":"2"}}}"#).unwrap();
    let o = klr(&["--config", p.to_str().unwrap(), "en", "--n", "2", "--label", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("e_n^2 = 2 e_n"), "{}", stdout(&o));
}

#[test]
fn check_suites_pass() {
    for (c, suite, n) in [("a2.json", "defining", "3"), ("a2.json", "proposition", "3"), ("a1.json", "nilhecke", "4")] {
        let o = klr(&["--config", &cfg(c), "check", "--suite", suite, "--n", n]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).contains(", 0 failed"));
    }
}

#[test]
fn json_reports_are_reproducible() {
    let args = ["--config", &cfg("a2.json"), "--json", "check", "--suite", "assoc", "--count", "25", "--seed", "9"];
    let a = klr(&args);
    let b = klr(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["failed"], 0);
    let ids: Vec<&str> = v["cases"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn dim_tables() {
    let o = klr(&["--config", &cfg("a1.json"), "--json", "dim", "--left", "1", "--right", "1", "--min-degree", "0", "--max-degree", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let oracle: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["oracle"].as_u64().unwrap()).collect();
    assert_eq!(oracle, vec![1, 0, 1, 0, 1]);
    let o = klr(&["--config", &cfg("a1.json"), "--json", "dim", "--left", "1,1", "--right", "1,1", "--min-degree", "0", "--max-degree", "0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["rows"][0]["oracle"].as_u64(), v["rows"][0]["rank"].as_u64()), (Some(3), Some(3)));
    let o = klr(&["--config", &cfg("a2.json"), "--json", "dim", "--left", "1,1", "--right", "1,2", "--max-degree", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["oracle"] == 0 && r["rank"] == 0));
}

#[test]
fn seq_and_quotient() {
    let o = klr(&["--config", &cfg("a1.json"), "--json", "seq", "--lambda-nu", &cfg("thick_a1.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 2);

    let run = |ideal: &str| -> serde_json::Value {
        let o = klr(&[
            "--config", &cfg("a1.json"), "--json", "quotient", "--lambda-nu", &cfg("thick_a1.json"),
            "--ideal", ideal, "--lengths", "1,2", "--max-degree", "4",
        ]);
        assert_eq!(o.status.code(), Some(0));
        serde_json::from_slice(&o.stdout).unwrap()
    };
    let full = run("full");
    assert_eq!(full["non_increasing"], true);
    for r in run("none")["rows"].as_array().unwrap() {
        assert_eq!(r["quotient"], r["rank"]);
    }
    // left sequence starting thick, L = 1: only the solid-start idempotents
    // are in the ideal, and they cannot reach this piece in one factor
    for r in run("solid-start")["rows"].as_array().unwrap() {
        if r["piece"]["left"].as_str().unwrap().starts_with("(L") && r["piece"]["right"].as_str().unwrap().starts_with("(L") && r["truncation_l"] == 1 {
            assert_eq!(r["quotient"], r["rank"], "{r}");
        }
    }
}
