use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use skewgroup_cli::{build_job, cmd_fixture, cmd_run, parse_job, render_json, CliError, RunOptions};

const BIN: &str = env!("CARGO_BIN_EXE_skewgroup");

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn fixture_file(name: &str) -> tempfile::NamedTempFile {
    write_temp(&cmd_fixture(name).unwrap())
}

fn run_bin(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn fixture_value(name: &str) -> Value {
    serde_json::from_str(&cmd_fixture(name).unwrap()).unwrap()
}

fn task_report<'a>(report: &'a Value, task: &str) -> &'a Value {
    report["tasks"].as_array().unwrap().iter().find(|t| t["task"] == task).unwrap()
}

fn check<'a>(task: &'a Value, name: &str) -> &'a Value {
    task["report"]["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()
}

#[test]
fn every_fixture_validates() {
    for name in ["trivial", "swap", "pauli", "perm", "cyclic"] {
        let f = fixture_file(name);
        let out = run_bin(&["validate", f.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn every_fixture_runs_clean() {
    for name in ["trivial", "swap", "pauli", "perm", "cyclic"] {
        let f = fixture_file(name);
        let out = run_bin(&["run", "--quiet", f.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn pauli_main_theorem_multiplicity_space_is_one_dimensional() {
    let f = fixture_file("pauli");
    let out = run_bin(&["run", "--json", "--task", "main_theorem", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["tasks"].as_array().unwrap().len(), 1);
    let t = task_report(&report, "main_theorem");
    assert_eq!(t["status"], "pass");
    assert_eq!(check(t, "direct_route_simple/0")["dims"]["module_dim"], 1);
}

#[test]
fn swap_invariant_theory_corner_dimension_four() {
    let f = fixture_file("swap");
    let out = run_bin(&["run", "--json", "--task", "invariant_theory", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let t = task_report(&report, "invariant_theory");
    assert_eq!(t["status"], "pass");
    assert_eq!(check(t, "corner_surjective")["dims"]["corner_dim"], 4);
}

#[test]
fn trivial_main_theorem_passes() {
    let f = fixture_file("trivial");
    let out = run_bin(&["run", "--task", "main_theorem", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[PASS] main_theorem on M"));
    assert!(text.ends_with("overall: PASS (1/1 tasks)\n"));
}

#[test]
fn timing_goes_to_stderr_only() {
    let f = fixture_file("perm");
    let out = run_bin(&["run", "--json", "--task", "skew", f.path().to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("time skew"));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("time"));
}

#[test]
fn json_reports_are_byte_identical() {
    let f = fixture_file("pauli");
    let a = run_bin(&["run", "--json", f.path().to_str().unwrap()]);
    let b = run_bin(&["run", "--json", f.path().to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn non_associative_group_table_is_rejected() {
    let mut job = fixture_value("trivial");
    // {0, 1} with 0 as identity and 1 * 1 = 1 is fine; break associativity on three elements
    job["group"] = serde_json::json!({"order": 3, "table": [[0, 1, 2], [1, 0, 1], [2, 2, 0]]});
    job["action"]["mats"] = serde_json::json!([[[[1.0, 0.0]]], [[[1.0, 0.0]]], [[[1.0, 0.0]]]]);
    let f = write_temp(&job.to_string());
    let out = run_bin(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("group.table") && err.contains("not associative"), "{err}");
}

#[test]
fn missing_unit_is_a_parse_error() {
    let mut job = fixture_value("pauli");
    job["algebra"].as_object_mut().unwrap().remove("unit");
    let err = parse_job(&job.to_string()).unwrap_err();
    assert!(matches!(err, CliError::Parse { .. }), "{err:?}");
    let f = write_temp(&job.to_string());
    let out = run_bin(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unit"));
}

#[test]
fn malformed_json_reports_position() {
    let err = parse_job("{\n  \"algebra\": [,]\n}").unwrap_err();
    match err {
        CliError::Parse { line, .. } => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn validation_errors_name_their_location() {
    let mut job = fixture_value("pauli");
    job["modules"]["M"]["rho"][1] = serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]);
    let spec = parse_job(&job.to_string()).unwrap();
    match build_job(&spec, None, None).unwrap_err() {
        CliError::Validation { location, source } => {
            assert_eq!(location, "modules.M");
            assert!(matches!(source, skewgroup::Error::NotARepresentation { .. }));
        }
        other => panic!("{other:?}"),
    }

    let mut job = fixture_value("pauli");
    job["tasks"] = serde_json::json!([{"task": "main_theorem", "module": "N"}]);
    let spec = parse_job(&job.to_string()).unwrap();
    let err = build_job(&spec, None, None).unwrap_err();
    assert!(err.to_string().contains("tasks[0]") && err.to_string().contains("unknown module"));

    job["tasks"] = serde_json::json!([{"task": "skew", "module": "M"}]);
    let spec = parse_job(&job.to_string()).unwrap();
    assert!(build_job(&spec, None, None).unwrap_err().to_string().contains("takes no module"));

    job["tasks"] = serde_json::json!([{"task": "meataxe"}]);
    let spec = parse_job(&job.to_string()).unwrap();
    assert!(build_job(&spec, None, None).unwrap_err().to_string().contains("unknown task"));
}

#[test]
fn flat_row_major_matrices_are_accepted() {
    let mut job = fixture_value("pauli");
    let rho = job["modules"]["M"]["rho"].as_array().unwrap().clone();
    let flat: Vec<Value> = rho
        .iter()
        .map(|m| Value::Array(m.as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap().clone()).collect()))
        .collect();
    job["modules"]["M"]["rho"] = Value::Array(flat);
    let spec = parse_job(&job.to_string()).unwrap();
    let built = build_job(&spec, None, None).unwrap();
    let reference = build_job(&parse_job(&cmd_fixture("pauli").unwrap()).unwrap(), None, None).unwrap();
    for i in 0..4 {
        assert_eq!(built.modules["M"].rho(i), reference.modules["M"].rho(i));
    }
}

#[test]
fn non_simple_module_fails_main_theorem_with_exit_one() {
    // M (+) M over the swap fixture is not simple; the task errors, the job fails
    let mut job = fixture_value("swap");
    let rho = job["modules"]["M"]["rho"].as_array().unwrap().clone();
    let doubled: Vec<Value> = rho
        .iter()
        .map(|m| {
            let rows = m.as_array().unwrap();
            let d = rows.len();
            let zero = serde_json::json!([0.0, 0.0]);
            let mut out = Vec::new();
            for i in 0..2 * d {
                let mut row = Vec::new();
                for j in 0..2 * d {
                    let v = if i / d == j / d { rows[i % d][j % d].clone() } else { zero.clone() };
                    row.push(v);
                }
                out.push(Value::Array(row));
            }
            Value::Array(out)
        })
        .collect();
    job["modules"]["M"] = serde_json::json!({"dim": 4, "rho": doubled});
    job["tasks"] = serde_json::json!([{"task": "main_theorem", "module": "M"}]);
    let f = write_temp(&job.to_string());
    let out = run_bin(&["run", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("module is not simple"));
}

#[test]
fn overrides_reach_the_report() {
    let f = fixture_file("cyclic");
    let opts = RunOptions { tol: Some(1e-7), seed: Some(5), tasks: vec!["skew".into()] };
    let report = cmd_run(f.path().to_str().unwrap(), &opts).unwrap();
    assert_eq!(report.job.seed, 5);
    assert_eq!(report.job.tol, 1e-7);
    assert_eq!(report.tasks.len(), 1);
    let json: Value = serde_json::from_str(&render_json(&report)).unwrap();
    assert_eq!(json["tasks"][0]["report"]["seed"], 5);
}

#[test]
fn unknown_task_filter_and_fixture_are_rejected() {
    let f = fixture_file("trivial");
    let out = run_bin(&["run", "--task", "nope", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_bin(&["fixture", "octonions"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown fixture"));
}

#[test]
fn missing_file_is_an_error() {
    let out = run_bin(&["validate", "/nonexistent/job.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fixture_round_trips() {
    for name in ["trivial", "swap", "pauli", "perm", "cyclic"] {
        let text = cmd_fixture(name).unwrap();
        let spec = parse_job(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&spec).unwrap(), text);
        assert_eq!(spec.name.as_deref(), Some(name));
    }
}
