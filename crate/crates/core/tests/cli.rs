use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kappa-dist")).args(args).output().unwrap()
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kappa-dist"))
        .args(args)
        .env(key, value)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let p = std::env::temp_dir().join(format!("kappa-dist-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&p).unwrap();
        TempDir(p)
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, contents).unwrap();
        p.to_str().unwrap().to_string()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn eval_csv_has_header_and_values() {
    let o = run(&["eval", "--family", "type2", "--alpha", "2", "--kappa", "0.3", "--x", "1", "--what", "pdf,cdf,hazard"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,pdf,cdf,hazard"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row[0], 1.0);
    // pdf = hazard · survival
    assert!((row[1] - row[3] * (1.0 - row[2])).abs() < 1e-14);
    assert!(text.ends_with('\n') && !text.contains('\r'));
    assert!(stderr(&o).is_empty());
}

#[test]
fn json_schema_and_key_order() {
    let o = run(&["tabulate", "--family", "type1", "--alpha", "1", "--nu", "2", "--kappa", "0.2", "--grid", "lin:0.5:2:4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    let top: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(top, ["family", "params", "rows"]);
    assert_eq!(v["family"], "type1");
    let params: Vec<&str> = v["params"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(params, ["alpha", "beta", "nu", "kappa"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let cols: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(cols, ["x", "pdf", "cdf"]);
    let cdfs: Vec<f64> = rows.iter().map(|r| r["cdf"].as_f64().unwrap()).collect();
    assert!(cdfs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn quantile_rows_round_trip_through_eval() {
    let o = run(&["eval", "--family", "type4", "--alpha", "1.5", "--kappa", "0.4", "--p", "0.25,0.75"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,quantile"));
    for (line, p) in lines.zip([0.25, 0.75]) {
        let x = line.split(',').nth(1).unwrap();
        let back = run(&["eval", "--family", "type4", "--alpha", "1.5", "--kappa", "0.4", "--x", x, "--what", "cdf"]);
        let cdf: f64 = stdout(&back).lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert!((cdf - p).abs() < 1e-10);
    }
}

#[test]
fn out_flag_writes_file_and_leaves_stdout_empty() {
    let dir = TempDir::new("out");
    let path = dir.0.join("s.csv");
    let p = path.to_str().unwrap();
    let o = run(&["sample", "--family", "type5", "--n", "2", "--kappa", "0.3", "--count", "100", "--seed", "3", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 101);
    let again = run(&["sample", "--family", "type5", "--n", "2", "--kappa", "0.3", "--count", "100", "--seed", "3"]);
    assert_eq!(stdout(&again), text);
    let other = run(&["sample", "--family", "type5", "--n", "2", "--kappa", "0.3", "--count", "100", "--seed", "4"]);
    assert_ne!(stdout(&other), text);
}

#[test]
fn fit_reads_plain_and_csv_inputs() {
    let dir = TempDir::new("fit");
    let draws = run(&["sample", "--family", "type2", "--alpha", "1.5", "--kappa", "0.2", "--count", "3000", "--seed", "1"]);
    let csv = stdout(&draws);
    let plain: String = csv.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let plain_path = dir.file("plain.txt", &format!("# draws\n\n{plain}"));
    let with_extra: String = std::iter::once("id,value\n".to_string())
        .chain(csv.lines().skip(1).enumerate().map(|(i, l)| format!("{i},{l}\n")))
        .collect();
    let csv_path = dir.file("table.csv", &with_extra);
    let a = run(&["fit", "--family", "type2", "--input", &plain_path, "--format", "json"]);
    let b = run(&["fit", "--family", "type2", "--input", &csv_path, "--col", "value", "--format", "json"]);
    let c = run(&["fit", "--family", "type2", "--input", &csv_path, "--col", "2", "--header", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a), stdout(&c));
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["family"], "type2");
    assert!((v["params"]["alpha"].as_f64().unwrap() - 1.5).abs() < 0.2);
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--family", "type2", "--x", "1"]).status.code(), Some(2));
    assert_eq!(run(&["tabulate", "--family", "type2", "--alpha", "1", "--kappa", "0.2", "--grid", "cubic:0:1:3"]).status.code(), Some(2));
    let missing = run(&["tail", "--input", "/definitely/not/here.txt"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("/definitely/not/here.txt"));
    let dir = TempDir::new("parse");
    let bad = dir.file("bad.txt", "1.0\n2.0\nabc\n");
    let o = run(&["fit", "--family", "type2", "--input", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn domain_errors_exit_3() {
    let o = run(&["eval", "--family", "type2", "--alpha", "1", "--kappa", "1.2", "--x", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("κ<1"));
    let o = run(&["eval", "--family", "type4", "--alpha", "1", "--kappa", "0", "--x", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let dir = TempDir::new("neg");
    let neg = dir.file("neg.txt", "1.0\n-2.0\n3.0\n");
    assert_eq!(run(&["fit", "--family", "type2", "--input", &neg]).status.code(), Some(3));
    let o = run(&["moments", "--family", "knormal", "--kappa", "0.7", "--orders", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn exhausted_budget_exits_4() {
    let args = ["moments", "--family", "type3", "--alpha", "1", "--lambda", "2", "--kappa", "0.3", "--orders", "1"];
    assert_eq!(run(&args).status.code(), Some(0));
    let o = run_with_env(&args, "KAPPA_DIST_EVAL_BUDGET", "10");
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("did not converge"));
    assert_eq!(run_with_env(&args, "KAPPA_DIST_EVAL_BUDGET", "lots").status.code(), Some(2));
}
