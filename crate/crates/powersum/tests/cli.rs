use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use powersum::report::RunReport;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powersum"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Column `col` of the CSV row whose first field is `key`.
fn cell(csv: &str, key: &str, col: &str) -> String {
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let i = r.headers().unwrap().iter().position(|h| h == col).unwrap();
    r.records()
        .map(Result::unwrap)
        .find(|rec| &rec[0] == key)
        .unwrap_or_else(|| panic!("no row {key} in\n{csv}"))[i]
        .to_owned()
}

fn value(csv: &str, key: &str, col: &str) -> f64 {
    cell(csv, key, col).parse().unwrap()
}

fn reports(dir: &Path) -> Vec<RunReport> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| RunReport::from_json(&fs::read_to_string(p).unwrap()).unwrap())
        .collect()
}

#[test]
fn bounds_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["bounds", "--n", "2", "--j", "0"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("formula,applicable,value,range_top,notes\n"));
    assert!((value(&csv, "T4", "value") - 1.457738).abs() < 1e-6);
    assert_eq!(cell(&csv, "T4", "range_top"), "4");

    let csv = stdout(&run(dir.path(), &["bounds", "--n", "4", "--corollary3"]));
    assert!((value(&csv, "C3lower", "value") - 2.077447).abs() < 1e-6);
    assert!((value(&csv, "C3upper", "value") - 2.236068).abs() < 1e-6);

    let csv = stdout(&run(dir.path(), &["bounds", "--alpha", "2"]));
    assert!((value(&csv, "Phi", "value") - 1.118034).abs() < 1e-6);
    assert!((value(&csv, "CeilEnvelope", "value") - 2f64.sqrt()).abs() < 1e-6);

    assert_eq!(reports(dir.path()).len(), 3);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["bounds", "--n", "2", "--m", "3", "--j", "1"][..],
        &["bounds", "--alpha", "0.5"],
        &["bounds", "--n", "two"],
        &["construct", "--p", "9"],
        &["construct", "--p", "2"],
        &["phi", "--alpha-min", "0.5"],
        &["phi", "--alpha-min", "3", "--alpha-max", "2"],
        &["phi", "--step", "0"],
        &["verify", "--trials", "0"],
        &["verify", "--trails", "5"],
        &["optimize", "--n", "2"],
        &["optimize", "--n", "2", "--m", "4", "--restarts", "0"],
        &[
            "optimize",
            "--n",
            "3",
            "--m",
            "9",
            "--warm-start",
            "montgomery",
        ],
        &["bounds", "--format", "xml", "--n", "2"],
    ] {
        let o = run(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    assert!(!dir.path().exists() || reports(dir.path()).is_empty());
}

#[test]
fn construct_reports_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["construct", "--p", "3", "--format", "json"]);
    assert!(o.status.success());
    let r = RunReport::from_json(&stdout(&o)).unwrap();
    let c = &r.outputs["certificate"];
    assert!((c["observedMax"].as_f64().unwrap() - 1.732051).abs() < 1e-6);
    assert!((c["theoreticalMax"].as_f64().unwrap() - 1.732051).abs() < 1e-6);

    let csv = stdout(&run(dir.path(), &["construct", "--p", "11"]));
    assert!((value(&csv, "11", "observed_max") - 11f64.sqrt()).abs() < 1e-8);
    assert_eq!(cell(&csv, "11", "range_top"), "109");
}

#[test]
fn verify_campaign() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "verify", "--trials", "1000", "--n-max", "12", "--m-max", "200", "--seed", "7",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("1000/1000 pass"));

    let o = run(
        dir.path(),
        &["verify", "--trials", "1", "--n-max", "1", "--m-max", "1"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("1/1 pass"));
}

#[test]
fn optimize_sandwich() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "optimize",
            "--n",
            "2",
            "--m",
            "4",
            "--restarts",
            "64",
            "--iters",
            "2000",
            "--seed",
            "42",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let best = value(&stdout(&o), "2", "best_value");
    assert!((1.457738..=1.732052).contains(&best), "{best}");
    let err = stderr(&o);
    assert!(
        err.contains("bestValue") && err.contains("lower bound") && err.contains("sandwich ok")
    );

    let o = run(dir.path(), &["optimize", "--n", "1", "--m", "10"]);
    assert_eq!(value(&stdout(&o), "1", "best_value"), 1.0);

    let o = run(
        dir.path(),
        &[
            "optimize",
            "--n",
            "3",
            "--m",
            "9",
            "--restarts",
            "128",
            "--iters",
            "500",
        ],
    );
    assert!(value(&stdout(&o), "3", "best_value") >= 1.763834);
}

#[test]
fn phi_curve_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "phi",
            "--alpha-min",
            "1",
            "--alpha-max",
            "3",
            "--step",
            "0.25",
        ],
    );
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("alpha,phi,sqrt_phi,ceil_envelope\n"));
    assert_eq!(value(&csv, "1", "phi"), 1.0);
    assert_eq!(value(&csv, "2", "phi"), 1.25);
    assert!((value(&csv, "3", "phi") - 4.0 / 3.0).abs() < 5e-9);
    let saved: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    assert_eq!(saved.len(), 1);
    assert_eq!(fs::read_to_string(&saved[0]).unwrap(), csv);
}

#[test]
fn reports_round_trip_and_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "optimize",
        "--n",
        "3",
        "--m",
        "8",
        "--restarts",
        "8",
        "--iters",
        "300",
        "--seed",
        "3",
    ];
    let mut canon = Vec::new();
    for workers in ["1", "4", "4"] {
        let o = run(
            dir.path(),
            &[&args[..], &["--workers", workers, "--format", "json"]].concat(),
        );
        let text = stdout(&o);
        let r = RunReport::from_json(&text).unwrap();
        assert_eq!(RunReport::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(r.schema_version, 1);
        assert_eq!(r.seed, Some(3));
        canon.push(r.canonical());
    }
    assert!(canon.windows(2).all(|w| w[0] == w[1]));

    let saved = reports(dir.path());
    assert_eq!(saved.len(), 3);
    assert!(saved.iter().all(|r| r.canonical() == canon[0]));
}
