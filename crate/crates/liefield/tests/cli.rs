use std::path::PathBuf;
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liefield"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn normal_order_expands_to_ten_terms() {
    let out = run(&["--mode", "quantum", "normal-order", "a(g)*ad(f1)*ad(f2)"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.trim().split(" + ").count(), 10, "{text}");
    assert!(text.contains("ad(f1)*ad(f2)*a(g)") && text.contains("form(f1,f2;g)"));
}

#[test]
fn cumulant_weights_are_eulerian() {
    let out = run(&["--mode", "quantum", "cumulants", "--n", "5"]);
    assert_eq!(code(&out), 0);
    let last = stdout(&out).lines().last().unwrap().to_string();
    assert!(
        last.starts_with("C_5 = ") && last.ends_with("[weights 1 11 11 1]"),
        "{last}"
    );
}

#[test]
fn psd_check_passes_on_the_lattice() {
    let cfg = config("lattice.toml");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "psd-check",
        "--max-particles",
        "3",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let first = stdout(&out).lines().next().unwrap().to_string();
    assert!(
        first.starts_with("gram size 20") && first.ends_with("pass"),
        "{first}"
    );
}

#[test]
fn failed_checks_exit_with_one() {
    let cfg = config("lattice.toml");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "psd-check",
        "--max-particles",
        "2",
        "--seed",
        "1",
        "--tolerance=-1",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).lines().next().unwrap().ends_with("FAIL"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&run(&["parse", "a(f"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["--jobs", "0", "parse", "a(f)"])), 2);
    assert_eq!(
        code(&run(&["--config", "/nonexistent/config.toml", "kernel"])),
        2
    );
    let cfg = config("lattice.toml");
    assert_eq!(
        code(&run(&["--config", cfg.to_str().unwrap(), "kernel"])),
        2
    );
    let err = run(&["parse", "a(f"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("1:4"));
}

#[test]
fn numeric_failures_exit_with_three() {
    let cfg = config("continuum.toml");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "kernel",
        "--order",
        "2",
        "--tolerance",
        "1e-15",
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("converge"));
}

#[test]
fn kernel_reports_value_and_error() {
    let cfg = config("continuum.toml");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "kernel",
        "--variant",
        "Q+",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("Q+(g;f) = "), "{}", stdout(&out));
}

#[test]
fn machine_output_is_stable_across_runs_and_workers() {
    let lattice = config("lattice.toml");
    let cases: Vec<Vec<&str>> = vec![
        vec!["--mode", "quantum", "moments", "--n", "4"],
        vec![
            "--mode",
            "quantum",
            "normal-order",
            "a(g)*ad(f1)*ad(f2)*ad(f3)",
        ],
        vec!["gsip-verify", "--n", "3"],
        vec![
            "--config",
            lattice.to_str().unwrap(),
            "psd-check",
            "--max-particles",
            "3",
            "--seed",
            "2",
        ],
        vec![
            "--config",
            lattice.to_str().unwrap(),
            "eval-form",
            "form(;f,g,h) + 2*form(f;g)^2",
        ],
    ];
    for case in cases {
        let mut outputs = Vec::new();
        for jobs in ["1", "1", "4"] {
            let mut args = vec!["--format", "machine", "--jobs", jobs];
            args.extend(&case);
            let out = run(&args);
            assert_eq!(
                code(&out),
                0,
                "{case:?}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            outputs.push(out.stdout);
        }
        assert_eq!(outputs[0], outputs[1], "{case:?} differs between runs");
        assert_eq!(
            outputs[0], outputs[2],
            "{case:?} differs between worker counts"
        );
        let doc: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
        assert_eq!(doc["schemaVersion"], 1);
    }
}

#[test]
fn overlap_document() {
    let out = run(&[
        "--format", "machine", "overlap", "--s", "3:4", "--s1", "1:2", "--s2", "1:2",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["command"], "overlap");
    assert_eq!(
        (doc["pairwise"].as_bool(), doc["sum"].as_bool()),
        (Some(false), Some(true))
    );
}

#[test]
fn every_subcommand_has_help() {
    for sub in [
        "parse",
        "normal-order",
        "commutator",
        "vev",
        "moments",
        "cumulants",
        "connected",
        "jacobi",
        "gs-state",
        "gsip-verify",
        "psd-check",
        "kernel",
        "eval-form",
        "scattering",
        "overlap",
        "tensor",
    ] {
        assert_eq!(code(&run(&[sub, "--help"])), 0, "{sub}");
    }
}
