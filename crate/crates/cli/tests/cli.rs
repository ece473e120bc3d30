use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn szeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_szeta"))
        .args(args)
        .env_remove("SZETA_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(text: &[u8]) -> Value {
    serde_json::from_slice(text).expect("valid JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_matches_golden_files() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases: [(&[&str], &str); 6] = [
        (&["--help"], "help.txt"),
        (&["zeros", "--help"], "zeros.txt"),
        (&["s", "--help"], "s.txt"),
        (&["pcf", "--help"], "pcf.txt"),
        (&["check", "--help"], "check.txt"),
        (&["report", "--help"], "report.txt"),
    ];
    for (args, file) in cases {
        let out = szeta(args);
        assert_eq!(code(&out), 0);
        let want = fs::read_to_string(golden.join(file)).unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{file}");
    }
}

#[test]
fn zeros_to_twenty() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z.txt");
    let out = szeta(&["zeros", "--t-max", "20", "--out", path_str(&file)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&file).unwrap();
    let values: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(values.len(), 1);
    assert!((values[0] - 14.134725).abs() < 1e-6);

    let out = szeta(&["zeros", "--import", path_str(&file), "--validate"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn zeros_errors() {
    let out = szeta(&["zeros", "--t-max", "5"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stderr(&out).lines().count(), 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "# zeros\n21.022039639\n14.134725142\n").unwrap();
    let out = szeta(&["zeros", "--import", path_str(&bad)]);
    assert_eq!(code(&out), 2);
    let msg = stderr(&out);
    assert!(msg.contains("line 3"), "{msg}");
    assert_eq!(msg.lines().count(), 1);

    let out = szeta(&["zeros", "--t-max", "abc"]);
    assert_eq!(code(&out), 1);
    let out = szeta(&["zeros"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn incomplete_file_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sparse.txt");
    fs::write(&file, "# t_max: 60\n14.134725142\n21.022039639\n25.010857580\n").unwrap();
    let out = szeta(&["zeros", "--import", path_str(&file), "--validate"]);
    assert_eq!(code(&out), 2);
    let out = szeta(&["pcf", "--t", "50", "--zeros", path_str(&file)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("count check"));
}

#[test]
fn check_exit_codes() {
    let out = szeta(&["check", "--identity", "w_partition"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out.stdout)["passed"], Value::Bool(true));

    let out = szeta(&["check", "--identity", "lemma4", "--tol", "1e-6"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = json(&out.stdout);
    assert!(report["max_abs_discrepancy"].as_f64().unwrap() < 1e-6);

    let out = szeta(&["check", "--identity", "lemma99"]);
    assert_eq!(code(&out), 1);
    let out = szeta(&["check", "--identity", "lemma4", "--params", "y"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn failed_check_still_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("lemma4.json");
    let out = szeta(&[
        "check", "--identity", "lemma4", "--tol", "1e-30", "--params", "y=1:2", "--out", path_str(&file),
    ]);
    assert_eq!(code(&out), 2);
    let report = json(&fs::read(&file).unwrap());
    assert_eq!(report["passed"], Value::Bool(false));
}

#[test]
fn report_only_check_with_zeros_file() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = dir.path().join("z.txt");
    assert_eq!(code(&szeta(&["zeros", "--t-max", "300", "--out", path_str(&zeros)])), 0);
    let out = szeta(&[
        "check", "--identity", "lemma8", "--zeros", path_str(&zeros), "--params", "T=300",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = json(&out.stdout);
    assert_eq!(report["assertable"], Value::Bool(false));
    assert!(report["max_abs_discrepancy"].is_number());
    assert!(report.to_string().contains("error_scale"));

    // Coverage shortfall is a validation failure.
    let out = szeta(&[
        "check", "--identity", "lemma8", "--zeros", path_str(&zeros), "--params", "T=1000",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn s_and_pcf_csv() {
    let out = szeta(&["s", "--from", "10", "--to", "11", "--step", "0.5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,S");
    assert_eq!(lines.len(), 4);

    let out = szeta(&["pcf", "--t", "100", "--alpha-max", "1", "--step", "0.25"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("alpha,F\n0,"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn report_schema_determinism_and_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = dir.path().join("z.txt");
    assert_eq!(code(&szeta(&["zeros", "--t-max", "500", "--out", path_str(&zeros)])), 0);
    let run = |name: &str, threads: &str| {
        let json_path = dir.path().join(format!("{name}.json"));
        let csv_path = dir.path().join(format!("{name}.csv"));
        let out = Command::new(env!("CARGO_BIN_EXE_szeta"))
            .args([
                "report", "--t", "500", "--x", "20", "--zeros", path_str(&zeros), "--out", path_str(&json_path),
                "--csv", path_str(&csv_path),
            ])
            .env("SZETA_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        (fs::read(json_path).unwrap(), fs::read(csv_path).unwrap())
    };
    let (a_json, a_csv) = run("a", "1");
    let (b_json, b_csv) = run("b", "4");
    assert_eq!(a_json, b_json);
    assert_eq!(a_csv, b_csv);

    let report = json(&a_json);
    let keys: Vec<&str> = report.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "T", "x", "beta", "lhs", "rhs_theorem", "rhs_goldston", "f_tail_source", "discrepancy_abs",
            "discrepancy_rel", "notes"
        ]
    );
    let rhs: Vec<&str> = report["rhs_theorem"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(rhs, ["loglog", "f_tail", "euler", "prime_sum"]);
    assert!(String::from_utf8(a_csv).unwrap().starts_with("alpha,F\n"));

    let out = szeta(&["report", "--t", "800", "--x", "20", "--zeros", path_str(&zeros), "--out", path_str(&dir.path().join("c.json"))]);
    assert_eq!(code(&out), 2);
    assert_eq!(stderr(&out).lines().count(), 1);
}

#[test]
fn bad_thread_setting_is_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_szeta"))
        .args(["check", "--identity", "w_partition"])
        .env("SZETA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}
