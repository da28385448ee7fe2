//! The command-line front end, driven in process.

use apery_moments::cli::{dispatch, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use apery_moments::selfcheck;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("apery-moments").chain(args.iter().copied());
    let code = dispatch(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn apery_prints_sequence() {
    assert_eq!(run(&["apery", "--n", "1"]), (EXIT_PASS, "1\n5\n".into()));
    let (code, out) = run(&["apery", "--n", "5", "--check"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("1\n5\n73\n1445\n33001\n819005\n"));
}

#[test]
fn certify_cases() {
    for case in ["L2", "L6"] {
        let (code, out) = run(&["certify", "--case", case]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.starts_with("PASS"));
    }
}

#[test]
fn moments_k0() {
    let (code, out) = run(&["moments", "--kmax", "0", "--tol", "1e-6"]);
    assert_eq!(code, EXIT_PASS);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("0,") && row.contains(",1,") && row.ends_with("PASS"), "{row}");
}

#[test]
fn modular_checks() {
    assert_eq!(run(&["modular", "--check", "theta"]).0, EXIT_PASS);
    assert_eq!(run(&["modular", "--check", "param", "--terms", "20"]).0, EXIT_PASS);
    // Two printed table entries are wrong, so the table check fails.
    assert_eq!(run(&["modular", "--check", "specials"]).0, EXIT_FAIL);
}

#[test]
fn point_evaluations() {
    let (code, out) = run(&["phi", "--x", "1", "--prec", "128"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("branch Right"));
    let (code, out) = run(&["hyper", "--z", "0.5"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("value 1.1595952669639283657"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["apery"]).0, EXIT_USAGE);
    assert_eq!(run(&["apery", "--n", "3", "--prec", "32"]).0, EXIT_USAGE);
    assert_eq!(run(&["moments", "--tol", "0"]).0, EXIT_USAGE);
    assert_eq!(run(&["phi", "--x", "40"]).0, EXIT_USAGE);
    assert_eq!(run(&["phi", "--x", "abc"]).0, EXIT_USAGE);
}

#[test]
fn figures_written() {
    let dir = std::env::temp_dir().join(format!("apery-figures-{}", std::process::id()));
    let (code, out) = run(&["figures", "--out", dir.to_str().unwrap(), "--prec", "128"]);
    assert_eq!(code, EXIT_PASS);
    let files: Vec<&str> = out.lines().collect();
    assert_eq!(files.len(), 10);
    for f in files {
        let text = std::fs::read_to_string(f).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,value"));
        let first = lines.next().unwrap();
        let (x, v) = first.split_once(',').unwrap();
        assert!(x.parse::<f64>().is_ok() && v.parse::<f64>().is_ok(), "{first}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn selfcheck_lines_are_reproducible() {
    for id in [1, 5, 9, 12, 13] {
        assert_eq!(selfcheck::run(id, 256).line(), selfcheck::run(id, 256).line());
    }
}
