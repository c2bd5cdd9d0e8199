//! Command-line contract: exit codes, output schema, and error routing.

use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_primworld"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn write_scenario(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const MINIMAL: &str = r#"{
    "objects": [
        { "name": "ball", "shape": "sphere", "size": 1.0,
          "position": [128.0, 128.0, 10.0], "physical": true }
    ],
    "run": { "steps": 10 }
}"#;

#[test]
fn successful_run_exits_zero_and_writes_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "minimal.json", MINIMAL);
    let out = dir.path().join("t.csv");
    let (code, stdout, stderr) = run(&["run", &scenario, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stdout.contains("ticks"), "summary missing from stdout:\n{stdout}");

    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,object_id,px,py,pz,vx,vy,vz,energy,dilation"));
    // t = 0 row plus one per tick at the default sampling stride.
    assert_eq!(lines.count(), 11);
    assert!(out.with_extension("summary.json").exists());
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, stderr) = run(&["run"]);
    assert_eq!(code, 1, "missing argument: {stderr}");

    let (code, _, stderr) = run(&["demo", "warpdrive"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("unknown demo"), "stderr: {stderr}");

    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 1);
}

#[test]
fn scenario_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();

    let empty = write_scenario(dir.path(), "empty.json", r#"{ "objects": [], "run": { "steps": 1 } }"#);
    let (code, _, stderr) = run(&["run", &empty]);
    assert_eq!(code, 2);
    assert!(stderr.contains("no objects"), "stderr: {stderr}");

    let syntax = write_scenario(dir.path(), "syntax.json", "{ not json");
    let (code, _, _) = run(&["run", &syntax]);
    assert_eq!(code, 2);

    let missing = dir.path().join("nowhere.json");
    let (code, _, _) = run(&["run", missing.to_str().unwrap()]);
    assert_eq!(code, 2);

    let profile = write_scenario(dir.path(), "profile.json", "{}");
    let (code, _, stderr) = run(&["classify", &profile]);
    assert_eq!(code, 2);
    assert!(stderr.contains("incomplete profile"), "stderr: {stderr}");
    assert_eq!(stderr.matches("missing field").count(), 17, "stderr: {stderr}");
}

#[test]
fn script_faults_exit_three_but_still_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let faulty = write_scenario(
        dir.path(),
        "faulty.json",
        r#"{
            "objects": [
                { "name": "statue", "shape": "box", "size": 1.0,
                  "position": [50.0, 50.0, 5.0], "physical": false,
                  "script_source": "default { state_entry() { llSetForce(<1.0, 0.0, 0.0>); } }" }
            ],
            "run": { "steps": 5 }
        }"#,
    );
    let out = dir.path().join("faulty.csv");
    let (code, _, stderr) = run(&["run", &faulty, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 3, "stderr: {stderr}");
    assert!(stderr.contains("fault"), "stderr: {stderr}");
    assert!(out.exists(), "trajectory should be written even on faults");
    assert!(out.with_extension("summary.json").exists());
}

#[test]
fn sample_every_controls_row_stride() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "minimal.json", MINIMAL);
    let out = dir.path().join("strided.csv");
    let (code, _, _) =
        run(&["run", &scenario, "--out", out.to_str().unwrap(), "--sample-every", "5"]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    // Header, t = 0, t = 5 ticks, final tick.
    assert_eq!(csv.lines().count(), 4);
}
