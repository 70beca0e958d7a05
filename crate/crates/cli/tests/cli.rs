use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_archtrop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json report")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("valid json error")
}

#[test]
fn analyze_univariate_report() {
    let out = run(&["analyze", "x1^2 - x1 - 1"]);
    let v = stdout_json(&out);
    assert_eq!(v["schema_version"], 1);
    let slopes = v["results"]["archtrop"]["slopes"].as_array().unwrap();
    assert_eq!(slopes.len(), 1);
    assert_eq!(slopes[0]["multiplicity"], 2);
    assert!(slopes[0]["float"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn member_in_and_out() {
    let out = run(&[
        "member",
        "1 + x1^3 + x2^2 - 10*x1*x2",
        "--point",
        "1,1/10",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["member"]["status"], "In");

    let out = run(&["member", "x1 - 2", "--point", "3"]);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["member"]["status"], "Out");
}

#[test]
fn member_log_point() {
    let out = run(&["member", "x1 - 1", "--log-point", "0"]);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["member"]["status"], "In");
}

#[test]
fn file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    let mut fh = std::fs::File::create(&path).unwrap();
    writeln!(fh, "x1^2 - x1 - 1").unwrap();
    let out = run(&["analyze", &format!("@{}", path.display())]);
    let v = stdout_json(&out);
    assert_eq!(
        v["results"]["archtrop"]["slopes"].as_array().unwrap().len(),
        1
    );
}

#[test]
fn exit_codes() {
    // syntax error -> 1, structured error on stderr
    let out = run(&["analyze", "x1 + +"]);
    assert_eq!(out.status.code(), Some(1));
    let e = stderr_json(&out);
    assert_eq!(e["error"]["kind"], "Syntax");

    // nonpositive rational query -> 1
    let out = run(&["member", "x1 - 1", "--point", "-2"]);
    assert_eq!(out.status.code(), Some(1));

    // invalid precision cap -> 1
    let out = run(&["analyze", "x1 - 1", "--precision-bits", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["analyze", "x1 - 1", "--precision-bits", "99999"]);
    assert_eq!(out.status.code(), Some(1));

    // valid cap -> 0
    let out = run(&["analyze", "x1 - 1", "--precision-bits", "128"]);
    assert_eq!(out.status.code(), Some(0));

    // success -> 0
    let out = run(&["analyze", "x1 - 1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn deterministic_output() {
    let strip_timing = |out: &Output| {
        let mut v = stdout_json(out);
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&v).unwrap()
    };
    let a = run(&["analyze", "1 + x1^3 + x2^2 - 10*x1*x2", "--plot"]);
    let b = run(&["analyze", "1 + x1^3 + x2^2 - 10*x1*x2", "--plot"]);
    assert_eq!(strip_timing(&a), strip_timing(&b));

    let a = run(&["isolate", "x1*x2 - x1^2 - 1", "x2 - 1 - x1"]);
    let b = run(&["isolate", "x1*x2 - x1^2 - 1", "x2 - 1 - x1"]);
    assert_eq!(strip_timing(&a), strip_timing(&b));
}

#[test]
fn plot_clipped_to_window() {
    let out = run(&[
        "analyze",
        "1 + x1^3 + x2^2 - 10*x1*x2",
        "--plot",
        "--window",
        "-1,1,-1,1",
    ]);
    let v = stdout_json(&out);
    let segs = v["results"]["plot"]["segments"].as_array().unwrap();
    assert!(!segs.is_empty());
    for s in segs {
        for (i, c) in s.as_array().unwrap().iter().enumerate() {
            let c = c.as_f64().unwrap();
            assert!(
                (-1.0 - 1e-9..=1.0 + 1e-9).contains(&c),
                "coordinate {i} = {c} outside window"
            );
        }
    }
}

#[test]
fn amoeba_csv() {
    let out = run(&[
        "amoeba",
        "1 + x1^3 + x2^2 - 10*x1*x2",
        "--moduli",
        "3",
        "--phases",
        "2",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("log_x1,log_x2,err"));
    let first = lines.next().expect("at least one sample row");
    assert_eq!(first.split(',').count(), 3);
    for field in first.split(',') {
        field.parse::<f64>().expect("numeric csv field");
    }
}

#[test]
fn bounds_report_shape() {
    let out = run(&["bounds", "1 - x1 + 1000000000*x1^2 - x1^3 + x1^4"]);
    let v = stdout_json(&out);
    let b = &v["results"]["bounds"];
    assert!(b["cauchy"]["inner"]["float"].is_f64());
    assert!(b["hausdorff_menu"].as_array().unwrap().len() >= 2);
    // the big middle coefficient opens two root-norm gap regions
    let counts = b["gaps"]["counts"].as_array().unwrap();
    assert_eq!(counts.len(), 2);
    let total: i64 = counts.iter().map(|c| c["count"].as_i64().unwrap()).sum();
    assert_eq!(total, 4);
}

#[test]
fn isolate_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&[
        "isolate",
        "x1 - 2",
        "x2 - 3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let cands = v["results"]["isolate"]["candidates"].as_array().unwrap();
    assert_eq!(cands.len(), 1);
    let x = cands[0]["coords"][0]["float"].as_f64().unwrap();
    assert!((x - 2f64.ln()).abs() < 1e-12);
}
