use std::path::PathBuf;
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("verify binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{}-{name}", std::process::id()))
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn describe_h0_lists_its_anchors() {
    let o = verify(&["describe", "h0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for anchor in ["Eq. 89", "Eq. 95", "Eq. 96", "Eq. 97"] {
        assert!(text.contains(anchor), "missing {anchor} in\n{text}");
    }
    assert!(text.lines().all(|l| l.starts_with("h0/")));
}

#[test]
fn describe_class_e_lists_its_anchors() {
    let text = stdout(&verify(&["describe", "class-e"]));
    for anchor in ["124a", "124b", "Eq. 126", "Eq. 130"] {
        assert!(text.contains(anchor), "missing {anchor} in\n{text}");
    }
}

#[test]
fn describe_all_covers_every_suite() {
    let text = stdout(&verify(&["describe", "all"]));
    for suite in ["algebra", "lowdim", "orbits", "h0", "kappa", "class-e", "appendix", "induced"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{suite}/"))), "no entries for {suite}");
    }
    assert!(text.lines().all(|l| l.split('\t').count() == 3));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let o = verify(&["--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite 'nope'"));
    assert_eq!(verify(&["describe", "nope"]).status.code(), Some(2));
}

#[test]
fn invalid_configuration_exits_with_two() {
    assert_eq!(verify(&["--suite", "appendix", "--cutoff", "99"]).status.code(), Some(2));
    assert_eq!(verify(&["--suite", "appendix", "--samples", "1"]).status.code(), Some(2));
    assert_eq!(verify(&["--suite", "appendix", "--tol-scale", "0"]).status.code(), Some(2));
}

#[test]
fn passing_run_writes_json_and_csv() {
    let (json, csv) = (tmp("ok.json"), tmp("ok.csv"));
    let o = verify(&["--suite", "appendix", "--out", json.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let summary = &report["body"]["summary"];
    assert_eq!(summary["failed"], 0);
    assert!(summary["total"].as_u64().unwrap() > 1000);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().next(), Some("id,status,value,expected"));
    assert_eq!(table.lines().count() as u64, summary["total"].as_u64().unwrap() + 1);
}

#[test]
fn failing_checks_exit_with_one() {
    let json = tmp("strict.json");
    let o = verify(&["--suite", "appendix", "--tol-scale", "1e-30", "--out", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL appendix:"));
}

#[test]
fn report_body_is_reproducible() {
    let bodies: Vec<serde_json::Value> = ["a", "b"]
        .iter()
        .map(|tag| {
            let path = tmp(&format!("det-{tag}.json"));
            let o = verify(&["--suite", "lowdim", "--samples", "2000", "--seed", "7", "--out", path.to_str().unwrap()]);
            assert!(o.status.code().is_some());
            let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
            v["body"].clone()
        })
        .collect();
    assert_eq!(bodies[0], bodies[1]);
    assert_eq!(bodies[0]["config"]["seed"], 7);
}
