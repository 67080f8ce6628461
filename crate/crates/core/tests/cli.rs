//! End-to-end runs of the command-line front end.

use std::path::{Path, PathBuf};
use std::process::Command;
use systolab::cli::{dispatch_to, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK};
use systolab::MetricComplex;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = dispatch_to(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_systolab"))
}

#[test]
fn growth_of_free_group_ends_at_closed_form() {
    let (code, out, _) = run(&[
        "growth", "--group", "free 2", "--norm", "word", "--rmax", "12",
    ]);
    assert_eq!(code, EXIT_OK);
    let last = out.lines().last().unwrap();
    assert_eq!(last.split(',').nth(1), Some("1062881"));
    assert_eq!(
        out.lines().next(),
        Some("r,beta,log_beta_over_r,lemma73_bound")
    );
    assert_eq!(out.lines().count(), 14);
}

#[test]
fn torus_systole_prints_three() {
    let (code, out, _) = run(&[
        "systole",
        "--complex",
        &data("torus3x4.txt"),
        "--phi",
        &data("ab.txt"),
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "3.0\n");
}

#[test]
fn empty_and_unknown_invocations_print_usage() {
    let (code, _, err) = run(&[]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("Usage"));
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("Usage"));
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}

#[test]
fn input_errors_exit_two() {
    let (code, _, err) = run(&["growth", "--group", "free two", "--rmax", "3"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("error"));
    let (code, _, _) = run(&[
        "systole",
        "--complex",
        "/nonexistent",
        "--phi",
        &data("ab.txt"),
    ]);
    assert_eq!(code, EXIT_INPUT);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(
        &bad,
        "v 0\nv 1\nv 2\ne 0 0 1 1.0\ne 1 1 2 1.0\ne 2 2 0 5.0\nt 0 1 2\n",
    )
    .unwrap();
    let (code, _, err) = run(&[
        "systole",
        "--complex",
        bad.to_str().unwrap(),
        "--phi",
        &data("ab.txt"),
    ]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("triangle 0 1 2"), "{err}");
}

#[test]
fn exhausted_budget_exits_three() {
    let out = bin()
        .args(["growth", "--group", "free 2", "--rmax", "12"])
        .env("SYSTOLAB_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INCONCLUSIVE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "manifest.txt")
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn golden_runs(args: &[&str]) -> Vec<Vec<(String, Vec<u8>)>> {
    let root = tempfile::tempdir().unwrap();
    [("1", "a"), ("1", "b"), ("4", "c")]
        .iter()
        .map(|(threads, tag)| {
            let out: PathBuf = root.path().join(tag);
            let mut argv: Vec<&str> = args.to_vec();
            let o = out.to_str().unwrap().to_string();
            argv.extend(["--threads", threads, "--out", &o]);
            let (code, _, err) = run(&argv);
            assert_eq!(code, EXIT_OK, "{err}");
            let manifest = std::fs::read_to_string(out.join("manifest.txt")).unwrap();
            assert!(manifest.contains(&format!("param threads {threads}")));
            outputs(&out)
        })
        .collect()
}

#[test]
fn outputs_are_byte_identical_across_runs_and_threads() {
    let torus = data("torus3x4.txt");
    let ab = data("ab.txt");
    let rp2 = data("rp2.txt");
    let z2 = data("rp2_phi.txt");
    let wedge = data("wedge.txt");
    let free = data("free2.txt");
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "growth",
            "--group",
            "product { abelian 1 ; free 1 }",
            "--norm",
            "freeprod word 2 word",
            "--rmax",
            "8",
        ],
        vec!["entropy", "--group", "free 2", "--rmax", "8"],
        vec!["free-product-limit", "--rmax", "8"],
        vec!["systole", "--complex", &torus, "--phi", &ab],
        vec!["systole", "--complex", &rp2, "--phi", &z2, "--geodesic"],
        vec![
            "stable-systole",
            "--complex",
            &torus,
            "--phi",
            &ab,
            "--class",
            "1,0",
            "--kmax",
            "3",
        ],
        vec![
            "volume-entropy",
            "--complex",
            &wedge,
            "--phi",
            &free,
            "--rmax",
            "8",
            "--sandwich",
            "3",
        ],
        vec![
            "optimize",
            "--complex",
            &torus,
            "--phi",
            &ab,
            "--iters",
            "3",
            "--seed",
            "7",
        ],
        vec!["scan", "--family", "wedges", "--rmax", "6"],
    ];
    for args in cases {
        let runs = golden_runs(&args);
        assert!(!runs[0].is_empty(), "{args:?} wrote nothing");
        assert_eq!(runs[0], runs[1], "{args:?} differs between runs");
        assert_eq!(runs[0], runs[2], "{args:?} differs between thread counts");
    }
}

#[test]
fn manifest_records_inputs_and_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, _) = run(&[
        "systole",
        "--complex",
        &data("torus3x4.txt"),
        "--phi",
        &data("ab.txt"),
        "--out",
        out,
    ]);
    assert_eq!(code, EXIT_OK);
    let m = std::fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    assert!(m.starts_with("subcommand systole\n"));
    assert_eq!(
        m.lines()
            .filter(|l| l.starts_with("input ") && l.contains(" sha256 "))
            .count(),
        2
    );
    assert!(m.contains("param geodesic false"));
    assert!(m.contains("wall_seconds "));
    let csv = std::fs::read_to_string(dir.path().join("systole.csv")).unwrap();
    assert!(csv.starts_with("basepoint,length,label\n"));
}

#[test]
fn optimize_writes_trace_and_metric() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, stdout, err) = run(&[
        "optimize",
        "--complex",
        &data("torus3x4.txt"),
        "--phi",
        &data("ab.txt"),
        "--iters",
        "4",
        "--step",
        "1.2",
        "--min-step",
        "1.01",
        "--seed",
        "3",
        "--normalize",
        "--subdivide",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(stdout.contains("verified_ratio"));
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("iteration,round,ratio,systole,volume,step,accepted\n"));
    let best =
        MetricComplex::parse(&std::fs::read_to_string(dir.path().join("best_metric.txt")).unwrap())
            .unwrap();
    assert!((best.volume().unwrap() - 1.0).abs() < 1e-9);
    let phi = std::fs::read_to_string(dir.path().join("best_phi.txt")).unwrap();
    systolab::PiOneData::parse_phi(&best, &phi).unwrap();
}
