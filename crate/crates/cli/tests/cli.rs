//! End-to-end tests of the `wehrl-lab` binary: output shapes, exit codes
//! and byte-level determinism.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wehrl-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn spectrum_emits_the_closed_form_table() {
    let out = run(&["spectrum", "--two-j", "1", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("j,lambda"));
    let row0: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row1: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row0[0], "0");
    assert!((row0[1].parse::<f64>().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(row1[0], "1");
    assert!((row1[1].parse::<f64>().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!(lines.next().is_none(), "only the nonzero head is listed");
}

#[test]
fn verify_majorization_reports_json_and_passes() {
    let out = run(&[
        "verify-majorization",
        "--two-j",
        "3",
        "--k",
        "4",
        "--trials",
        "200",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let json: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    assert_eq!(json["schema"], "wehrl-lab/1");
    assert_eq!(json["command"], "verify-majorization");
    assert_eq!(json["verdict"], "pass");
    assert_eq!(json["seed"], 7);
    assert!(json["build"].as_str().unwrap().contains("0.1.0"));
    assert!(json["min_slack"].as_f64().unwrap() >= -1e-10);
    assert_eq!(json["report"]["violations"], 0);
}

#[test]
fn wehrl_of_the_coherent_state_is_the_analytic_value() {
    let out = run(&["wehrl", "--two-j", "2", "--state", "coherent"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("two_j,state,quad_level,value,lower_bound")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let value: f64 = row[3].parse().unwrap();
    assert!((value - 2.0 / 3.0).abs() < 1e-8);
}

#[test]
fn quad_level_env_var_is_the_default() {
    let out = bin()
        .args([
            "wehrl", "--two-j", "2", "--state", "mixed", "--format", "csv",
        ])
        .env("WEHRL_LAB_QUAD_LEVEL", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "3", "level taken from the environment");
    // The flag wins over the environment.
    let out = bin()
        .args([
            "wehrl",
            "--two-j",
            "2",
            "--state",
            "mixed",
            "--quad-level",
            "5",
        ])
        .env("WEHRL_LAB_QUAD_LEVEL", "3")
        .output()
        .unwrap();
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "5");
}

#[test]
fn reports_are_byte_identical_for_the_same_run_spec() {
    let args = [
        "verify-majorization",
        "--two-j",
        "2",
        "--k",
        "2",
        "--trials",
        "100",
        "--seed",
        "11",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());

    // Thread count must not influence the bytes either.
    let mut with_threads: Vec<&str> = args.to_vec();
    with_threads.extend(["--threads", "2"]);
    let third = run(&with_threads);
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn usage_errors_exit_64() {
    // Unknown flag.
    let out = run(&["spectrum", "--two-j", "1", "--k", "1", "--bogus", "3"]);
    assert_eq!(out.status.code(), Some(64));
    // Unknown function tag.
    let out = run(&["limit", "--two-j", "1", "--function", "cubic"]);
    assert_eq!(out.status.code(), Some(64));
    // Unknown state.
    let out = run(&["wehrl", "--two-j", "1", "--state", "thermal"]);
    assert_eq!(out.status.code(), Some(64));
    // Missing required argument.
    let out = run(&["spectrum", "--k", "1"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn unwritable_output_path_exits_74() {
    let out = run(&[
        "spectrum",
        "--two-j",
        "1",
        "--k",
        "1",
        "--out",
        "/nonexistent-dir/report.csv",
    ]);
    assert_eq!(out.status.code(), Some(74));
}

#[test]
fn berezin_lieb_campaign_passes_and_honors_quad_level() {
    let out = run(&[
        "berezin-lieb",
        "--two-j",
        "2",
        "--trials",
        "40",
        "--seed",
        "1",
        "--quad-level",
        "8",
        "--function",
        "xlogx",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["parameters"]["quad_level"], 8);
    assert!(json["min_slack"].as_f64().unwrap() >= -1e-9);
    assert_eq!(json["report"][0]["function"], "xlogx");
}

#[test]
fn limit_table_converges_toward_the_target() {
    let out = run(&[
        "limit",
        "--two-j",
        "1",
        "--function",
        "xlogx",
        "--k-list",
        "20,80,320",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("two_k,k,scaled_value,target,abs_error"));
    let errors: Vec<f64> = lines
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    assert_eq!(errors.len(), 3);
    assert!(errors[0] > errors[1] && errors[1] > errors[2]);
}

#[test]
fn pminus_check_passes_in_both_orientations() {
    for (tj, tk) in [("2", "5"), ("5", "2")] {
        let out = run(&[
            "pminus-check",
            "--two-j",
            tj,
            "--two-k",
            tk,
            "--pairs",
            "40",
            "--seed",
            "3",
        ]);
        assert_eq!(out.status.code(), Some(0), "2J={tj} 2K={tk}");
        let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert!(json["report"]["max_vector_residual"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn glauber_campaign_passes() {
    let out = run(&[
        "glauber",
        "--n-max",
        "5",
        "--trials",
        "40",
        "--seed",
        "2",
        "--function",
        "xlogx",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let vacuum = json["report"][0]["vacuum_value"].as_f64().unwrap();
    assert!((vacuum - 1.0).abs() < 1e-6);
    assert!(json["min_slack"].as_f64().unwrap() >= -1e-6);
}

#[test]
fn search_min_entropy_reaches_the_coherent_value() {
    let out = run(&[
        "search-min-entropy",
        "--two-j",
        "1",
        "--k",
        "1",
        "--restarts",
        "4",
        "--seed",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let best = json["report"]["best_value"].as_f64().unwrap();
    let expected = -(2.0 / 3.0f64) * (2.0 / 3.0f64).ln() - (1.0 / 3.0) * (1.0 / 3.0f64).ln();
    assert!((best - expected).abs() < 1e-6);
    assert!(json["report"]["coherent_fidelity"].as_f64().unwrap() > 1.0 - 1e-6);
}

#[test]
fn an_under_budgeted_search_exits_2_with_a_violation_report() {
    // One restart and one iteration cannot reach the optimum on this cell;
    // the report must say so and the process must exit 2.
    let out = run(&[
        "search-min-entropy",
        "--two-j",
        "6",
        "--k",
        "4",
        "--restarts",
        "1",
        "--max-iters",
        "1",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["verdict"], "violation");
    assert!(json["report"]["gap"].as_f64().unwrap() > 1e-6);
}

#[test]
fn json_floats_carry_seventeen_significant_digits() {
    let out = run(&["spectrum", "--two-j", "1", "--k", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("6.6666666666666663e-1"),
        "pinned float formatting, got: {text}"
    );
}
