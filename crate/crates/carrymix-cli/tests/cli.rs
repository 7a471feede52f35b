//! End-to-end tests of the `carrymix` binary: output shapes, exit codes,
//! seed handling, and determinism.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carrymix"))
        .args(args)
        .env_remove("CARRYMIX_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn matrix_csv_golden() {
    let out = run(&["matrix", "--n", "3", "--b", "10"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "11/50,33/50,3/25\n33/200,67/100,33/200\n3/25,33/50,11/50\n"
    );
}

#[test]
fn matrix_json_metadata() {
    let out = run(&["matrix", "--n", "2", "--b", "2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "matrix");
    assert_eq!(v["params"]["n"], 2);
    assert_eq!(v["matrix"][0][0], "3/4");
    assert!(v["version"].is_string());
}

#[test]
fn separation_table_contains_oracle_row() {
    let out = run(&["sep", "--n", "3", "--b", "2", "--r-max", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("r,sep_exact,sep_closed\n"));
    assert!(text.contains("\n2,5/8,5/8\n"));
}

#[test]
fn stationary_and_decimal_display() {
    let out = run(&["stationary", "--n", "3"]);
    assert_eq!(stdout(&out), "1/6,2/3,1/6\n");
    let out = run(&["stationary", "--n", "3", "--decimal", "4"]);
    assert_eq!(stdout(&out), "0.1667,0.6667,0.1667\n");
}

#[test]
fn seeded_sampling_is_reproducible() {
    let args = [
        "shuffle", "sample", "--n", "6", "--b", "2", "--count", "5", "--seed", "42",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "byte-identical reruns");

    let other = run(&[
        "shuffle", "sample", "--n", "6", "--b", "2", "--count", "5", "--seed", "43",
    ]);
    assert_ne!(first.stdout, other.stdout);

    // the environment variable substitutes for the flag
    let via_env = Command::new(env!("CARGO_BIN_EXE_carrymix"))
        .args(["shuffle", "sample", "--n", "6", "--b", "2", "--count", "5"])
        .env("CARRYMIX_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(first.stdout, via_env.stdout);
}

#[test]
fn missing_seed_is_a_usage_error() {
    let out = run(&["shuffle", "sample", "--n", "4", "--b", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["matrix", "--n", "3", "--wat", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn riffle_variant_requires_two_piles() {
    let out = run(&[
        "shuffle",
        "sample",
        "--n",
        "4",
        "--b",
        "3",
        "--variant",
        "riffle",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumeration_cap_exit_code() {
    let out = run(&["shuffle", "dist", "--n", "30", "--b", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn shuffle_dist_small() {
    let out = run(&["shuffle", "dist", "--n", "2", "--b", "2"]);
    assert_eq!(stdout(&out), "permutation,probability\n1 2,3/4\n2 1,1/4\n");
}

#[test]
fn carries_and_tau_on_worked_example() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "6 3 3\n012\n012\n112\n111\n212\n121\n").unwrap();
    let path = file.path().to_str().unwrap();

    let out = run(&["carries", "--file", path]);
    assert_eq!(stdout(&out), "j,kappa\n1,3\n2,3\n3,2\n");

    let out = run(&["tau", "--file", path]);
    assert_eq!(
        stdout(&out),
        "j,tau,descents\n1,6 3 1 4 2 5,3\n2,4 1 5 2 6 3,3\n3,1 3 6 4 2 5,2\n"
    );

    let missing = run(&["carries", "--file", "/nonexistent/file.txt"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn mult_commands() {
    let out = run(&[
        "mult", "trace", "--k", "26", "--b", "10", "--digits", "3,2,4,1",
    ]);
    assert_eq!(stdout(&out), "i,kappa\n1,7\n2,5\n3,10\n4,3\n");

    let out = run(&["mult", "matrix", "--k", "2", "--b", "2"]);
    assert_eq!(stdout(&out), "1/2,1/2\n1/2,1/2\n");

    let out = run(&["mult", "tv", "--k", "7", "--b", "10", "--r-max", "1"]);
    assert_eq!(stdout(&out), "r,tv,bound\n1,6/35,7/20\n");

    let bad = run(&[
        "mult", "trace", "--k", "26", "--b", "10", "--digits", "3,12",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sections_commands() {
    let out = run(&["sections", "matrix", "--n", "1", "--r", "2"]);
    assert_eq!(stdout(&out), "1,0,0\n1,2,1\n0,0,1\n");

    let out = run(&["sections", "apply", "--n", "1", "--r", "2", "--h", "0,1,0"]);
    assert_eq!(stdout(&out), "0,2,0\n");

    // the constant sequence a_k = 1 has numerator 1 - x and is fixed by
    // sectioning at any step
    let out = run(&["sections", "apply", "--n", "1", "--r", "3", "--h", "1,-1,0"]);
    assert_eq!(stdout(&out), "1,-1,0\n");
}

#[test]
fn verify_quick_suite_passes() {
    let out = run(&["verify", "all", "--quick"]);
    assert!(out.status.success(), "verify all --quick must exit 0");
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
    assert!(text.contains("0 failed"));
}

#[test]
fn verify_single_targets_pass() {
    for target in ["stationary", "eigen", "tp2", "bijections", "card"] {
        let out = run(&["verify", target, "--quick"]);
        assert!(out.status.success(), "verify {target} failed");
    }
}

#[test]
fn verify_bijections_at_a_shape() {
    let out = run(&[
        "verify",
        "bijections",
        "--n",
        "3",
        "--m",
        "2",
        "--b",
        "2",
        "--exhaustive",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("all 64 arrays"));

    let out = run(&[
        "verify",
        "bijections",
        "--n",
        "4",
        "--m",
        "2",
        "--b",
        "3",
        "--samples",
        "50",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("50 seeded arrays"));

    // sampling without a seed is a usage error; exhaustive needs none
    let out = run(&[
        "verify",
        "bijections",
        "--n",
        "4",
        "--m",
        "2",
        "--b",
        "3",
        "--samples",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn theorem_main_report_shapes() {
    let out = run(&["verify", "theorem-main", "--n", "2", "--m", "2", "--b", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["equal"], true);
    assert_eq!(v["carries_law"]["0 0"], "9/16");
    assert_eq!(v["carries_law"], v["descents_law"]);

    let out = run(&[
        "verify",
        "theorem-main",
        "--mode",
        "montecarlo",
        "--n",
        "2",
        "--m",
        "2",
        "--b",
        "2",
        "--samples",
        "20000",
        "--seed",
        "5",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["generator"], "chacha8");
    assert!(v["chi_square"]["statistic"].is_number());

    // montecarlo mode without a seed is a usage error
    let out = run(&[
        "verify",
        "theorem-main",
        "--mode",
        "montecarlo",
        "--n",
        "2",
        "--m",
        "2",
        "--b",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["matrix", "--n", "4", "--b", "3", "--format", "json"],
        vec!["verify", "theorem-main", "--n", "2", "--m", "2", "--b", "3"],
        vec!["card-matrix", "--n", "4", "--b", "2"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
    }
}
