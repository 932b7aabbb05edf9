use std::path::PathBuf;
use std::process::{Command, Output};

use antiassoc::corpus::BUNDLED;

fn antiassoc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antiassoc"))
        .args(args)
        .env_remove("ANTIASSOC_CORPUS")
        .env_remove("ANTIASSOC_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("antiassoc-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn verify_bundled_corpus_passes() {
    let o = antiassoc(&["verify"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("summary:") && text.contains(" 0 fail"), "{text}");
}

#[test]
fn tolerance_below_precision_floor_is_flagged() {
    let o = antiassoc(&[
        "verify",
        "--suite",
        "degenerations",
        "--tol",
        "1e-30",
        "--precision",
        "64",
    ]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{text}");
    assert!(text.contains("precision-bound"), "{text}");
}

#[test]
fn perturbed_constant_names_the_record() {
    let corpus = BUNDLED.replacen(
        r#"[[1, 1, "e2"], [1, 2, "e3"], [2, 1, "-e3"]]"#,
        r#"[[1, 1, "e2"], [1, 2, "2*e3"], [2, 1, "-e3"]]"#,
        1,
    );
    assert_ne!(corpus, BUNDLED);
    let path = scratch("perturbed.json", &corpus);
    let o = antiassoc(&["--corpus", path.to_str().unwrap(), "verify", "--suite", "identities"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{text}");
    assert!(
        text.lines()
            .any(|l| l.starts_with("FAIL") && l.contains("AA3.1") && l.contains("antiassociativity")),
        "{text}"
    );
    std::fs::remove_file(path).ok();
}

#[test]
fn malformed_corpus_exits_2() {
    let path = scratch("bad.json", "{\"format_version\": 1, \"algebras\": 3}");
    let o = antiassoc(&["--corpus", path.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("algebras"));
    std::fs::remove_file(path).ok();

    let o = antiassoc(&["--corpus", "/nonexistent/corpus.json", "verify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_settings_exit_2() {
    assert_eq!(antiassoc(&["verify", "--precision", "32"]).status.code(), Some(2));
    assert_eq!(antiassoc(&["verify", "--tol", "2"]).status.code(), Some(2));
    assert_eq!(antiassoc(&["verify", "--ladder-ratio", "3/2"]).status.code(), Some(2));
}

#[test]
fn json_report_is_deterministic() {
    let args = [
        "verify",
        "--format",
        "json",
        "--suite",
        "identities",
        "--suite",
        "degenerations",
    ];
    let a = antiassoc(&args);
    let b = antiassoc(&[&["--jobs", "1"][..], &args].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["report_version"], 1);
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn environment_sets_flags() {
    let o = Command::new(env!("CARGO_BIN_EXE_antiassoc"))
        .args(["verify", "--suite", "alpha"])
        .env("ANTIASSOC_FORMAT", "json")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["suites"][0], "alpha");
}

#[test]
fn show_prints_table() {
    let o = antiassoc(&["show", "AA3.1"]);
    let text = stdout(&o);
    assert!(o.status.success());
    assert!(text.contains("e1e1 = e2") && text.contains("e2e1 = -e3"), "{text}");
    assert_eq!(antiassoc(&["show", "nope"]).status.code(), Some(2));
}

#[test]
fn h2_of_a31() {
    let o = antiassoc(&["h2", "A3.1"]);
    let text = stdout(&o);
    assert!(text.contains("dim Z2 = 5, dim B2 = 1, dim H2 = 4"), "{text}");
}

#[test]
fn extend_a31_gives_aa42() {
    let o = antiassoc(&["extend", "A3.1", "--cocycle", "D12-D21+D13"]);
    let text = stdout(&o);
    assert!(o.status.success());
    assert!(text.contains("table equals corpus record(s): AA4.2"), "{text}");

    let o = antiassoc(&["extend", "A3.1", "--cocycle", "D22"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a cocycle"));
}

#[test]
fn degen_prints_ladder() {
    let o = antiassoc(&["degen", "AA4.2->AA4.1"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.trim_start().starts_with("t = ")).count(), 13);
    assert!(text.contains("PASS"), "{text}");
}

#[test]
fn dims_passes() {
    let o = antiassoc(&["dims"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.contains("dim O(V4+1)"), "{text}");
}
