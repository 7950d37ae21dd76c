use std::process::{Command, Output};

use holonomy_cli::{explain, list_scenarios, CliError, BUNDLED, VERBS};

fn holonomy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holonomy")).args(args).output().unwrap()
}

fn scratch(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("holonomy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn passing_scenario_exits_zero() {
    let out = holonomy(&["run", "--scenario", "trivial-everything"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("overall: PASS"));
}

#[test]
fn failing_check_exits_one_with_location() {
    let out = holonomy(&["run", "--scenario", "flat-torus-bundle-fault", "--format", "structured"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "fail");
    let failing = report["results"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r["checks"].as_array().unwrap())
        .find(|c| c["status"] == "fail")
        .expect("a failing check");
    assert!(failing.get("counterexample").is_some(), "{failing}");
}

#[test]
fn schema_error_exits_two() {
    let path = scratch("bad.json", r#"{"name": "x", "requests": [{"verb": "validate-bundle", "bogus": 1}]}"#);
    let out = holonomy(&["run", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let path = scratch("broken.json", "{ not json");
    assert_eq!(holonomy(&["run", "--scenario", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn unknown_scenario_and_missing_request_exit_two() {
    assert_eq!(holonomy(&["run", "--scenario", "no-such-scenario"]).status.code(), Some(2));
    assert_eq!(holonomy(&["theorem-1", "--scenario", "trivial-everything"]).status.code(), Some(2));
}

#[test]
fn core_error_inside_a_verb_is_reported_at_its_request() {
    let path = scratch(
        "no-gerbe.json",
        r#"{"name": "no-gerbe", "description": "", "requests": [{"verb": "validate-bundle"}, {"verb": "validate-gerbe"}]}"#,
    );
    let out = holonomy(&["run", "--scenario", path.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let errored: Vec<_> = report["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "error")
        .map(|r| r["location"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(errored, ["requests[0]", "requests[1]"]);
}

#[test]
fn explain_verbs() {
    assert!(matches!(explain("bogus"), Err(CliError::UnknownVerb(_))));
    assert_eq!(holonomy(&["explain", "bogus"]).status.code(), Some(2));
    let text = explain("surface-holonomy").unwrap();
    assert!(text.contains("faces") && text.contains("edges") && text.contains("vertices"), "{text}");
    let listed = String::from_utf8(holonomy(&["explain", "--list"]).stdout).unwrap();
    for (v, _) in VERBS {
        assert!(listed.lines().any(|l| l == *v), "{v}");
    }
}

#[test]
fn list_scenarios_names_every_bundled_scenario() {
    let text = list_scenarios().unwrap();
    for (name, _) in BUNDLED {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name}");
    }
    let out = holonomy(&["list-scenarios"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("holonomy-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = holonomy(&[
        "globalise",
        "--scenario",
        "interval-two-arcs",
        "--format",
        "structured",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report["results"].as_array().unwrap().iter().all(|r| r["verb"] == "globalise"));
}
