//! Exit codes and output of the command-line front end.

use std::path::{Path, PathBuf};
use std::process::Command;

use tunnelcert::cli::{self, EXIT_DATA, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, EXIT_VIOLATIONS};
use tunnelcert::fixtures;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tunnelcert").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn thresholds_output() {
    let (code, out, _) = run(&["thresholds"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "prop4 0.3465735903\nprop5 0.1617535656\nelder 0.6931471806\n"
    );
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).0, EXIT_OK);
    assert_eq!(run(&["--version"]).0, EXIT_OK);
    assert_eq!(run(&["certify", "--help"]).0, EXIT_OK);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    let f = fixture("square_lattice");
    assert_eq!(
        run(&["certify", path_str(&f), "--n-max", "2"]).0,
        EXIT_USAGE
    );
    assert_eq!(run(&["certify", path_str(&f), "--tol", "0"]).0, EXIT_USAGE);
    assert_eq!(
        run(&["validate", path_str(&f), "--tol", "0.5"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        run(&["certify", path_str(&f), "--format", "xml"]).0,
        EXIT_USAGE
    );
}

#[test]
fn validate_clean_and_dirty() {
    let (code, out, _) = run(&["validate", path_str(&fixture("five_bracelet"))]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("ok"));

    let dir = tempfile::tempdir().unwrap();
    let mut file = fixtures::five_bracelet(0.1, 0.2).to_file();
    file.balls[2].center[0] -= 0.05;
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&file).unwrap()).unwrap();
    let (code, out, _) = run(&["validate", path_str(&bad)]);
    assert_eq!(code, EXIT_VIOLATIONS);
    assert!(out.contains("violation"));

    // certify refuses the same file
    let (code, _, err) = run(&["certify", path_str(&bad)]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("invalid pattern"));
}

#[test]
fn data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["validate", path_str(&missing)]).0, EXIT_DATA);

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"version\": 1,\n  \"balls\": [\n").unwrap();
    let (code, _, err) = run(&["certify", path_str(&broken)]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("broken.json:"), "{err}");

    let wrong = dir.path().join("wrong.json");
    std::fs::write(&wrong, "{\"version\": 1}").unwrap();
    assert_eq!(run(&["validate", path_str(&wrong)]).0, EXIT_DATA);
}

#[test]
fn certify_verdict_exit_codes() {
    let (code, out, _) = run(&["certify", path_str(&fixture("square_lattice"))]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("verdict: tunnel (Prop4)"), "{out}");

    let (code, out, _) = run(&["certify", path_str(&fixture("isolated_pair"))]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert!(out.contains("no elder sibling chain: p, q"), "{out}");
}

#[test]
fn json_format_and_report_agree() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("cert.json");
    let f = fixture("five_bracelet");
    let (code, out, _) = run(&[
        "certify",
        path_str(&f),
        "--format",
        "json",
        "--report",
        path_str(&report),
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&report).unwrap(), out);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "tunnel");
    assert_eq!(v["rule"], "Prop5");

    // text on stdout still writes a JSON report
    let (_, text, _) = run(&["certify", path_str(&f), "--report", path_str(&report)]);
    assert!(text.starts_with("verdict:"));
    assert_eq!(std::fs::read_to_string(&report).unwrap(), out);
}

#[test]
fn binary_threads_variable() {
    let bin = env!("CARGO_BIN_EXE_tunnelcert");
    let f = fixture("square_lattice");
    let one = Command::new(bin)
        .args(["certify", path_str(&f), "--format", "json"])
        .env("TUNNELCERT_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(bin)
        .args(["certify", path_str(&f), "--format", "json"])
        .env("TUNNELCERT_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(EXIT_OK));
    assert_eq!(one.stdout, many.stdout);

    for bad in ["0", "lots", "-2"] {
        let out = Command::new(bin)
            .args(["certify", path_str(&f)])
            .env("TUNNELCERT_THREADS", bad)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(EXIT_USAGE), "{bad}");
    }
}
