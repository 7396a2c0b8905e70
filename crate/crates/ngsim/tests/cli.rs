use std::process::{Command, Output};

use ngsim::program::{parse_result, SCHEMA_VERSION};

fn ngsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ngsim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn extent_result_has_the_schema_fields() {
    let o = ngsim(&["extent", r#"{"kind":"cat","alpha":1}"#]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for k in ["task", "inputs", "value", "error_band", "counters", "seed", "schema_version"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert!(v["counters"].get("amplitude_evals").is_some() && v["counters"].get("samples").is_some());
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    let doc = parse_result(&stdout(&o)).unwrap();
    assert_eq!(doc.task, "extent");
}

#[test]
fn every_sample_program_runs() {
    let dir = format!("{}/programs", env!("CARGO_MANIFEST_DIR"));
    let mut n = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let path = e.unwrap().path();
        if path.extension().is_some_and(|x| x == "json") {
            let o = ngsim(&["run", path.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&o.stderr));
            parse_result(&stdout(&o)).unwrap();
            n += 1;
        }
    }
    assert!(n >= 3);
}

#[test]
fn same_seed_same_output() {
    let args = ["--seed", "17", "norm", r#"{"kind":"cat","alpha":[0.5,0.5]}"#];
    let (a, b) = (ngsim(&args), ngsim(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = ngsim(&["--seed", "18", "norm", r#"{"kind":"cat","alpha":[0.5,0.5]}"#]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn validation_errors_exit_with_two() {
    assert_eq!(ngsim(&["breed-bound", "0.5"]).status.code(), Some(2));
    assert_eq!(ngsim(&["extent", r#"{"kind":"cat","alpha":0,"parity":"odd"}"#]).status.code(), Some(2));
    assert_eq!(ngsim(&["--epsilon", "-1", "norm", r#"{"kind":"vacuum"}"#]).status.code(), Some(2));
    assert_eq!(ngsim(&["run", "/nonexistent/program.json"]).status.code(), Some(2));
    assert_eq!(ngsim(&["--format", "xml", "table1"]).status.code(), Some(2));
}

#[test]
fn parse_errors_report_line_and_column() {
    let dir = std::env::temp_dir().join(format!("ngsim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("broken.json");
    std::fs::write(&f, "{\n  \"schema_version\": 1,\n  \"task\": {\"kind\": \"extent\"\n}\n").unwrap();
    let o = ngsim(&["run", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 5"), "{err}");
    assert!(err.contains("column"), "{err}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn numerical_failures_exit_with_three() {
    // the oracle cross-check cannot hold a far-displaced cat in five levels
    let o = ngsim(&["--cutoff", "5", "born", r#"{"kind":"cat","alpha":3}"#]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn born_with_oracle_cross_check() {
    let o = ngsim(&["--cutoff", "60", "born", r#"{"kind":"cat","alpha":1}"#, "--re", "0.4", "--im", "-0.2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let (a, b) = (v["value"].as_f64().unwrap(), v["details"]["oracle_value"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-10, "{a} {b}");
}

#[test]
fn approximate_born_reports_a_band() {
    let o = ngsim(&["--delta", "0.1", "--seed", "4", "born", r#"{"kind":"cat","alpha":1}"#, "--re", "0.2"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = parse_result(&stdout(&o)).unwrap();
    let band = doc.error_band.expect("band");
    assert!(band[0] <= band[1]);
    assert!(doc.counters.samples > 0);
}

#[test]
fn csv_outputs() {
    let o = ngsim(&["--format", "csv", "bs-bound", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("m,bound,exp_m"));

    let o = ngsim(&["--format", "csv", "table1"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == 6));

    let o = ngsim(&["--format", "csv", "extent", r#"{"kind":"vacuum"}"#]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().count() >= 2);
}

#[test]
fn threads_flag_is_accepted() {
    let o = ngsim(&["--threads", "2", "breed-bound", "14.14"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = parse_result(&stdout(&o)).unwrap();
    assert_eq!(doc.value, serde_json::json!(8));
}
