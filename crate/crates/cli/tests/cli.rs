//! End-to-end tests of the installed binary: output contracts, artifact
//! emission, config merging, and the 0/1/2 exit-code convention.

use std::path::PathBuf;
use std::process::{Command, Output};

fn symkdv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symkdv"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal termination")
}

fn temp_prefix(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symkdv-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir.join(tag)
}

#[test]
fn verify_passes_and_prints_one_verdict_per_check() {
    let out = symkdv(&["verify"]);
    let text = stdout(&out);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(text.matches(" PASS ").count(), 8, "stdout: {text}");
    assert!(!text.contains(" FAIL "), "stdout: {text}");
    assert!(text.contains("8/8 checks passed"), "stdout: {text}");
}

#[test]
fn run_writes_artifacts_and_reports_the_error() {
    let prefix = temp_prefix("run");
    let prefix_str = prefix.to_str().unwrap();
    let out = symkdv(&["run", "--scheme", "lagrangian", "--out", prefix_str]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("final max-norm error"), "stdout: {text}");
    assert!(text.contains("exact regime"), "stdout: {text}");
    for suffix in ["_solution.csv", "_mesh.csv", "_error.csv", "_plot.gp"] {
        let path = PathBuf::from(format!("{prefix_str}{suffix}"));
        assert!(path.exists(), "missing artifact {}", path.display());
    }
    let solution =
        std::fs::read_to_string(format!("{prefix_str}_solution.csv")).unwrap();
    assert!(solution.starts_with("m,n,t,x,u,u_exact,abs_err\n"), "{solution}");
}

#[test]
fn an_unknown_scheme_is_a_usage_error() {
    let out = symkdv(&["run", "--scheme", "spectral"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("unknown scheme"), "stderr: {}", stderr(&out));
}

#[test]
fn sweep_flags_on_run_are_a_usage_error() {
    let out = symkdv(&["run", "--scheme", "lagrangian", "--sweep", "tau"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("sweep subcommand"), "stderr: {}", stderr(&out));
}

#[test]
fn sweep_prints_the_slope_and_writes_the_table() {
    let prefix = temp_prefix("sweep");
    let prefix_str = prefix.to_str().unwrap();
    let out = symkdv(&[
        "sweep",
        "--scheme",
        "uniform-orthogonal",
        "--sweep",
        "tau",
        "--values",
        "0.1,0.05,0.025",
        "--out",
        prefix_str,
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("log-log slope"), "stdout: {text}");
    let table = std::fs::read_to_string(format!("{prefix_str}_error.csv")).unwrap();
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows.len(), 4, "header plus one row per member: {table}");
    assert!(rows[0].starts_with("param_value,final_linf"), "{table}");
}

#[test]
fn a_two_value_sweep_is_a_domain_error() {
    let out = symkdv(&[
        "sweep", "--scheme", "lagrangian", "--sweep", "tau", "--values", "0.1,0.05",
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("at least 3"), "stderr: {}", stderr(&out));
}

#[test]
fn count_invariants_handles_the_degenerate_origin() {
    let zeros = ["0"; 14].join(",");
    let out = symkdv(&["count-invariants", "--stencil", &zeros]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("rank: 3"), "stdout: {text}");
    assert!(text.contains("invariants: 11"), "stdout: {text}");
    assert!(text.contains("general position: no"), "stdout: {text}");
}

#[test]
fn count_invariants_reports_the_generic_case_for_a_seed() {
    let out = symkdv(&["count-invariants", "--seed", "42"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("rank: 4"), "stdout: {text}");
    assert!(text.contains("invariants: 10"), "stdout: {text}");
    assert!(text.contains("general position: yes"), "stdout: {text}");
}

#[test]
fn a_short_stencil_is_a_usage_error() {
    let thirteen = ["0"; 13].join(",");
    let out = symkdv(&["count-invariants", "--stencil", &thirteen]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("14"), "stderr: {}", stderr(&out));
}

#[test]
fn flags_override_the_config_file() {
    let prefix = temp_prefix("config");
    let prefix_str = prefix.to_str().unwrap();
    let conf = format!("{prefix_str}.conf");
    std::fs::write(
        &conf,
        format!("scheme = lagrangian\ntau = 0.05\n# comment line\nout = {prefix_str}\n"),
    )
    .unwrap();

    let out = symkdv(&["run", "--config", &conf, "--tau", "0.1"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let table = std::fs::read_to_string(format!("{prefix_str}_error.csv")).unwrap();
    assert!(table.lines().nth(1).unwrap().starts_with("0.1,"), "{table}");

    let out = symkdv(&["run", "--config", &conf]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let table = std::fs::read_to_string(format!("{prefix_str}_error.csv")).unwrap();
    assert!(table.lines().nth(1).unwrap().starts_with("0.05,"), "{table}");
}

#[test]
fn an_unknown_config_key_is_a_usage_error() {
    let prefix = temp_prefix("badkey");
    let conf = format!("{}.conf", prefix.to_str().unwrap());
    std::fs::write(&conf, "scheme = lagrangian\nmystery = 1\n").unwrap();
    let out = symkdv(&["run", "--config", &conf]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("mystery"), "stderr: {}", stderr(&out));
}
