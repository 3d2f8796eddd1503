use std::process::{Command, Output};

use latsum::io::ResultRecord;
use latsum::scalar::{embed, parse_exact};

fn latsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latsum")).args(args).output().expect("binary runs")
}

fn latsum_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latsum")).env("RAYON_NUM_THREADS", threads).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn record(o: &Output) -> ResultRecord {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn eval_exact_and_round_trip() {
    let rec = record(&latsum(&["eval", "--fixture", "a1_alpha1", "--k", "2,2,2", "--y", "0", "--mode", "exact"]));
    assert_eq!(rec.s, "pi^2/2 - 39/8");
    assert_eq!(rec.mode, "exact");
    let reparsed: ResultRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
    assert_eq!(reparsed.exact_s().unwrap(), parse_exact("pi^2/2 - 39/8", 4).unwrap());
}

#[test]
fn eval_numeric_agrees_with_embedded_exact_value() {
    let rec = record(&latsum(&["eval", "--fixture", "a1_alpha1", "--k", "2,2,2", "--mode", "numeric", "--precision", "128"]));
    let want = embed(&parse_exact("pi^2/2 - 39/8", 4).unwrap(), 256).to_decimal_string(40);
    // 5.98022…e-2: compare the leading 30 significant digits
    let digits = |s: &str| s.chars().filter(|c| c.is_ascii_digit()).take(30).collect::<String>();
    assert_eq!(digits(&rec.s), digits(&want));
    assert!(rec.s.starts_with("5.98022"));
}

#[test]
fn eval_zero_weight_with_nonintegral_constant_is_zero() {
    let rec = record(&latsum(&["eval", "--fixture", "ex31_rational", "--k", "0,1,2", "--y", "1/7,1/11"]));
    assert_eq!(rec.s, "0");
}

#[test]
fn eval_writes_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = latsum(&["eval", "--fixture", "a1_alpha2", "--k", "2,2,2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, stdout(&o));
    assert!(text.starts_with("S,C,mode,order,N_cyclotomic,timing_ms\n\"pi^2/32 - 39/512\""));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    std::fs::write(&path, r#"{"rank":2,"functionals":[{"direction":[1,0],"constant":"1/2"},{"direction":[0,1],"constant":"1/3"}]}"#).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(latsum(&["eval", "--arrangement", p, "--k", "1,2", "--y", "0,1/2"]).status.code(), Some(2));
    assert_eq!(latsum(&["eval", "--arrangement", p, "--k", "2,2", "--y", "1/3,1/2"]).status.code(), Some(0));
    assert_eq!(latsum(&["eval", "--arrangement", "/nonexistent/a.json", "--k", "1"]).status.code(), Some(1));
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(latsum(&["eval", "--arrangement", p, "--k", "1"]).status.code(), Some(1));
    let o = latsum(&["verify", "oracle", "--fixture", "a1_alpha1", "--k", "2,2,2", "--N", "10,20", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_suites_report_exact_zero() {
    let o = latsum(&["verify", "polytope", "--fixture", "ex31_rational", "--y", "1/7,1/11"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("max discrepancy: 0 (exact)"));
    let o = latsum(&["verify", "hierarchy", "--fixture", "a1_alpha1", "--remove", "f0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("max discrepancy: 0 (exact)"));
    let o = latsum(&["hierarchy-check", "--fixture", "ex31_rational", "--remove", "f3", "--y", "1/7,1/11", "--order", "4"]);
    assert!(stdout(&o).contains("max discrepancy: 0 (exact)"));
    let o = latsum(&["polytope-check", "--fixture", "a1_alphahalf", "--y", "1/3"]);
    assert!(stdout(&o).contains("max discrepancy: 0 (exact)"));
}

#[test]
fn oracle_scan_error_column_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let o = latsum(&["oracle-check", "--fixture", "a1_alpha1", "--k", "2,2,2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let errors: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(errors.len(), 4);
    assert!(errors.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn reproduce_examples_subset() {
    let o = latsum(&["reproduce-examples", "--filter", "a1_222"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.matches("PASS").count(), 3);
    assert!(out.contains("3 of 3 rows pass"));
}

#[test]
fn exact_output_is_independent_of_thread_count() {
    let args = ["eval", "--fixture", "a2_alpha3", "--k", "1,1,1,2,2,2,1,1,1"];
    let a = record(&latsum_threads(&args, "1"));
    let b = record(&latsum_threads(&args, "4"));
    assert_eq!((a.s, a.c, a.phi), (b.s, b.c, b.phi));
}
