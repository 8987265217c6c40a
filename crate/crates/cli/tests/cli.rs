use std::path::PathBuf;
use std::process::{Command, Output};

fn jcok(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jcok")).args(args).env_remove("JCOK_SEED").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("jcok-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn check_reports_violation() {
    let tuple = scratch("bad.txt", "p=5\nx=0,1,2\nH1=1\nH2=2\nH3=2\n");
    let out = jcok(&["check", tuple.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("# jcok check p=5"));
    assert!(text.contains("violated: 2*d_{1,1} <= D_1: 2 > 1"), "{text}");
}

#[test]
fn synthesize_round_trips_through_check() {
    let tuple = scratch("units.txt", "p=5\nx=0,1,2,3\nH1=1\nH2=1\nH3=1\nH4=1\n");
    let out = jcok(&["synthesize", tuple.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# verification OK"));
    let matrix = scratch("units.mat", &text);
    let out = jcok(&["check", tuple.to_str().unwrap(), "--verify-matrix", matrix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verification OK"));
    let mixed = scratch("mixed.txt", "p=7\nx=0,1,2,3\nH1=1,2\nH2=1,inf\nH3=2,2\nH4=1,3\n");
    let out = jcok(&["synthesize", mixed.to_str().unwrap(), "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let out =
        jcok(&["simulate", "--ensemble", "haar", "--p", "2", "--n", "4", "--shifts", "0", "--targets", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = jcok(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let broken = scratch("broken.txt", "p=5\nx=0,1\nH1=1\nH2=1,z\n");
    let out = jcok(&["check", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn oracle_scan_fixture() {
    let out = jcok(&["oracle", "scan", "--p", "3", "--x", "0,1,2", "--n", "1", "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = stdout(&out).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(lines, ["(0, 0, 0)\t6", "(1, 1, 2+)\t1", "(1, 2+, 1)\t1", "(2+, 1, 1)\t1"]);
}

#[test]
fn simulation_is_deterministic_under_seed() {
    let args = [
        "simulate",
        "--ensemble",
        "eps_balanced",
        "--weights",
        "0.6,0.4",
        "--p",
        "2",
        "--n",
        "6",
        "--trials",
        "3000",
        "--shifts",
        "0,2",
        "--targets",
        "1;1",
        "--seed",
        "4",
        "--format",
        "tsv",
    ];
    let a = jcok(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&jcok(&args)));
    assert!(stdout(&a).lines().next().unwrap().contains("seed=4"));
    let from_env = Command::new(env!("CARGO_BIN_EXE_jcok"))
        .args(&args[..args.len() - 4])
        .args(["--format", "tsv"])
        .env("JCOK_SEED", "4")
        .output()
        .unwrap();
    assert_eq!(stdout(&from_env), stdout(&a));
}

#[test]
fn moments_and_conjecture() {
    let out = jcok(&[
        "moments", "--p", "3", "--x", "0", "--groups", "1", "--n", "6", "--trials", "2000", "--format", "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("count_s\t1"));
    let five = scratch("five.txt", "p=7\nx=0,1,2,3,4\nH1=1\nH2=1\nH3=1\nH4=1\nH5=1\n");
    let out = jcok(&["conjecture", five.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("realizable (conjectural)"));
}
