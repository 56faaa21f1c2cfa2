use std::path::Path;
use std::process::{Command, Output};

use rootlab::cli::{ExperimentConfig, HEADER};

fn rootlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootlab")).args(args).env_remove("ROOTLAB_LANES").output().expect("spawn rootlab")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

const TRIG: [&str; 10] =
    ["--ensemble", "trig", "--n", "20", "--law", "rademacher", "--window", "0,6.283185307179586", "--seed", "42"];

fn count_args<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["count"];
    v.extend(TRIG);
    v.extend(["--trials", "300"]);
    v.extend(extra);
    v
}

#[test]
fn count_row_has_fixed_schema() {
    let out = stdout(&rootlab(&count_args(&[])));
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), HEADER.join(","));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "trig(n=20)");
    assert_eq!(row[1], "20");
    assert_eq!(row[2], "rademacher");
    assert_eq!(row[row.len() - 2], "asymptotic");
    let mean: f64 = row[row.len() - 5].parse().unwrap();
    assert!(mean > 10.0 && mean < 40.0);
    assert!(lines.next().is_none());
}

#[test]
fn runs_are_byte_identical_across_lanes() {
    let a = stdout(&rootlab(&count_args(&["--lanes", "1"])));
    let b = stdout(&rootlab(&count_args(&["--lanes", "8"])));
    let c = stdout(&rootlab(&count_args(&["--lanes", "8"])));
    assert_eq!(a, b);
    assert_eq!(b, c);
    let env =
        Command::new(env!("CARGO_BIN_EXE_rootlab")).args(count_args(&[])).env("ROOTLAB_LANES", "3").output().unwrap();
    assert_eq!(stdout(&env), a);
}

#[test]
fn output_file_is_written_once() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let p = path.to_str().unwrap();
    let o = rootlab(&count_args(&["--out", p]));
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, stdout(&rootlab(&count_args(&[]))));
}

fn assert_exit_without_file(args: &[&str], code: i32, path: &Path) {
    let o = rootlab(args);
    assert_eq!(o.status.code(), Some(code), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    assert!(!path.exists());
    assert!(!o.stderr.is_empty());
}

#[test]
fn config_errors_exit_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let o = out.to_str().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[ensemble]\nfamily = \"kac\"\nn = 10\n[run]\ntrails = 5\n").unwrap();
    assert_exit_without_file(&["count", "--config", bad.to_str().unwrap(), "--window", "-1,1", "--out", o], 2, &out);
    std::fs::write(&bad, "[ensemble\nfamily = \"kac\"\n").unwrap();
    assert_exit_without_file(&["count", "--config", bad.to_str().unwrap(), "--out", o], 2, &out);
    assert_exit_without_file(
        &["count", "--ensemble", "kac", "--n", "10", "--law", "cauchy", "--window", "-1,1", "--out", o],
        2,
        &out,
    );
    assert_exit_without_file(&["count", "--ensemble", "kac", "--n", "10", "--window", "1,-1", "--out", o], 2, &out);
    assert_exit_without_file(&["count", "--ensemble", "kac", "--n", "10", "--out", o], 2, &out);
    assert_exit_without_file(&["count", "--bogus-flag", "--out", o], 2, &out);
    assert_exit_without_file(
        &["count", "--ensemble", "kac", "--n", "10", "--window", "-1,1", "--trials", "0", "--out", o],
        2,
        &out,
    );
}

#[test]
fn failure_budget_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let args = [
        "check",
        "--condition",
        "green",
        "--ensemble",
        "trig",
        "--n",
        "10",
        "--grid",
        "4",
        "--trials",
        "20",
        "--out",
        out.to_str().unwrap(),
    ];
    assert_exit_without_file(&args, 3, &out);
}

#[test]
fn config_file_and_flags_merge() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        "[ensemble]\nfamily = \"trig\"\nn = 20\n\n[law]\nkind = \"rademacher\"\n\n[statistic]\nwindow = [0.0, 6.283185307179586]\n\n[run]\ntrials = 300\nseed = 42\n",
    )
    .unwrap();
    let from_file = stdout(&rootlab(&["count", "--config", cfg.to_str().unwrap()]));
    assert_eq!(from_file, stdout(&rootlab(&count_args(&[]))));
    let emitted = stdout(&rootlab(&["count", "--config", cfg.to_str().unwrap(), "--seed", "5", "--emit-config"]));
    let parsed = ExperimentConfig::parse(&emitted).unwrap();
    assert_eq!(parsed.run.seed, Some(5));
    assert_eq!(parsed.statistic.kind.as_deref(), Some("count"));
    assert_eq!(parsed.emit().unwrap(), emitted);
}

#[test]
fn compare_emits_three_rows() {
    let out = stdout(&rootlab(&[
        "compare",
        "--ensemble",
        "kac",
        "--n",
        "50",
        "--law-a",
        "rademacher",
        "--law-b",
        "gaussian",
        "--window",
        "-1,1",
        "--trials",
        "200",
        "--seed",
        "7",
    ]));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].contains(",rademacher,") && rows[1].contains(",gaussian-real,"));
    assert!(rows[2].contains("rademacher - gaussian-real") && rows[2].contains(",exact,"));
}

#[test]
fn baseline_and_listing() {
    let out = stdout(&rootlab(&["baseline", "--ensemble", "elliptic", "--n", "49", "--window=-inf,inf"]));
    let row = out.lines().nth(1).unwrap();
    assert!(row.contains(",7.0000000000000000e0,exact,"), "{row}");
    let a = stdout(&rootlab(&["list-baselines", "--json"]));
    assert_eq!(a, stdout(&rootlab(&["list-baselines", "--json"])));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for want in ["flat_expected", "trig_closed_form", "kac_gauss_expected"] {
        assert!(names.contains(&want));
    }
    assert!(stdout(&rootlab(&["list-baselines"])).contains("kac_rice_expected_count"));
}

#[test]
fn check_writes_json() {
    let out = stdout(&rootlab(&["check", "--condition", "parseval", "--trials", "5", "--seed", "3"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["condition"], "parseval");
    assert_eq!(v["verdict"], "consistent");
    let c3 = stdout(&rootlab(&["check", "--condition", "c3", "--ensemble", "trig", "--n", "30"]));
    let v: serde_json::Value = serde_json::from_str(&c3).unwrap();
    assert_eq!(v["verdict"], "consistent");
}

#[test]
fn sample_writes_roots() {
    let out = stdout(&rootlab(&["sample", "--ensemble", "kac", "--n", "12", "--seed", "1"]));
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "re,im,residual,is_real");
    assert_eq!(lines.count(), 12);
}

#[test]
fn other_statistics_run() {
    let lin = stdout(&rootlab(&[
        "linear",
        "--ensemble",
        "trig",
        "--n",
        "20",
        "--real-bump",
        "1,0.5",
        "--trials",
        "100",
        "--seed",
        "1",
    ]));
    assert!(lin.lines().nth(1).unwrap().contains(",quadrature,"));
    let cor = stdout(&rootlab(&[
        "correlate",
        "--ensemble",
        "trig",
        "--n",
        "20",
        "--real-bump",
        "1,0.3",
        "--real-bump",
        "1.5,0.3",
        "--trials",
        "100",
    ]));
    assert!(cor.contains("correlation(k=2,l=0)"));
    let rep = stdout(&rootlab(&[
        "repulsion",
        "--ensemble",
        "trig",
        "--n",
        "20",
        "--x",
        "3",
        "--radius",
        "0.1",
        "--trials",
        "100",
    ]));
    assert!(rep.lines().nth(1).unwrap().starts_with("trig(n=20),20,gaussian-real,repulsion,"));
}
