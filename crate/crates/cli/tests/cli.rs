use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homaloid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn polar_prints_components() {
    let out = run(&["polar", "x0*x1*x2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "d/dx0: x1*x2\nd/dx1: x0*x2\nd/dx2: x0*x1\n");
}

#[test]
fn moving_shows_base_divisor() {
    let out = run(&["moving", "x0^2*x1*x2"]);
    let text = stdout(&out);
    assert!(text.starts_with("base divisor: x0\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("moving[")).count(), 3);
    assert!(text.contains("moving[0]: 2*x1*x2"));
}

#[test]
fn linear_input_has_no_moving_part() {
    let out = run(&["moving", "x0+x1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree < 2"));
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(run(&["polar", "x0*(x1"]).status.code(), Some(2));
    assert_eq!(run(&["homaloidal", "x0 +* x1"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "x0^2 + x1^2"]).status.code(), Some(2));
}

#[test]
fn cremona_in_p3_is_homaloidal() {
    let doc = report(&["homaloidal", "x0*x1*x2*x3", "-p", "101"]);
    assert_eq!(doc["homaloidal"], true);
    assert_eq!(doc["degree"], 1);
    assert_eq!(doc["verdicts"]["oracle_reduced"], true);
}

#[test]
fn smooth_conic_and_cone() {
    assert_eq!(
        report(&["homaloidal", "x1^2 - x0*x2", "-p", "101"])["degree"],
        1
    );
    let cone = report(&["homaloidal", "x0*x1", "--dim", "2", "-p", "101"]);
    assert_eq!(cone["dominant"], false);
    assert_eq!(cone["homaloidal"], false);
}

#[test]
fn certify_chains() {
    let doc = report(&["certify", "x0*x1*x2*x3"]);
    assert_eq!(doc["certificate"].as_array().unwrap().len(), 3);
    assert_eq!(doc["field"], "Q");
    let doc = report(&["certify", "x0^2*x1*x2"]);
    assert_eq!(doc["homaloidal"], true);
    let doc = report(&["certify", "x0*x1*(x0 + x1)", "--dim", "2"]);
    assert_eq!(doc["homaloidal"], false);
    assert_eq!(
        doc["certificate"][0]["refutation"]["reason"],
        "rank-deficient"
    );
}

#[test]
fn output_is_byte_stable() {
    let args = [
        "homaloidal",
        "x0*x1*x2*x3*x4",
        "--mode",
        "sample",
        "-p",
        "31",
        "--seed",
        "5",
        "--targets",
        "16",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let one = run(&[
        "homaloidal",
        "x0*x1*x2*x3*x4",
        "--mode",
        "sample",
        "-p",
        "31",
        "--seed",
        "5",
        "--targets",
        "16",
        "--workers",
        "1",
    ]);
    assert_eq!(one.stdout, a.stdout);
}

#[test]
fn sample_mode_needs_a_seed() {
    assert_eq!(
        run(&["homaloidal", "x0*x1*x2", "--mode", "sample", "-p", "101"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn json_file_and_input_file() {
    let dir = std::env::temp_dir().join(format!("homaloid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("f.txt");
    std::fs::write(&input, "x0^3*x1*x2\n").unwrap();
    let json = dir.join("out.json");
    let out = run(&[
        "homaloidal",
        "--file",
        input.to_str().unwrap(),
        "-p",
        "101",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("homaloidal=true degree=1"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["input"], "x0^3*x1*x2");
    assert_eq!(doc["millis"], 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unstable_primes_exit_3() {
    assert_eq!(
        run(&["homaloidal", "x0^2 + x1^2 + 7*x2^2", "-p", "7", "-p", "101"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn resource_bounds_exit_4() {
    assert_eq!(
        run(&[
            "homaloidal",
            "x0*x1*x2*x3*x4*x5",
            "--mode",
            "exhaustive",
            "-p",
            "101"
        ])
        .status
        .code(),
        Some(4)
    );
    assert_eq!(
        run(&["classify", "--n", "3", "--r", "4"]).status.code(),
        Some(4)
    );
}

#[test]
fn classify_small_census() {
    let out = run(&["classify", "--n", "1", "--r", "1"]);
    let text = stdout(&out);
    assert!(text.contains("arrangements           6"));
    assert!(text.contains("oracle homaloidal      6"));
    let out = run(&["classify", "--n", "2", "--r", "2", "-p", "101"]);
    let text = stdout(&out);
    assert!(text.contains("full rank              246"));
    assert!(text.contains("structural homaloidal  246"));
    assert!(text.contains("oracle homaloidal      246"));
}
