//! End-to-end runs of the `brauer` binary over the fixture corpus.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use brauer_cli::parse_job;
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn brauer(args: &[&str], stdin: Option<&str>) -> Output {
    use std::io::Write;
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_brauer"));
    cmd.args(args).stdin(std::process::Stdio::piped()).stdout(std::process::Stdio::piped()).stderr(std::process::Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn fixtures() -> Vec<PathBuf> {
    let mut jobs: Vec<PathBuf> = std::fs::read_dir(root().join("fixtures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "job"))
        .collect();
    jobs.sort();
    assert!(jobs.len() >= 20, "fixture corpus is incomplete");
    jobs
}

fn run_fixture(job: &Path) -> Output {
    brauer(&["--json", "--file", job.to_str().unwrap()], None)
}

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(root().join("schema/report.schema.json")).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

#[test]
fn fixtures_match_expected_json() {
    for job in fixtures() {
        let out = run_fixture(&job);
        assert!(out.status.success(), "{}: {}", job.display(), String::from_utf8_lossy(&out.stderr));
        let expected = std::fs::read_to_string(job.with_extension("json")).unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{}", job.display());
    }
}

#[test]
fn outputs_validate_against_schema() {
    let v = validator();
    for job in fixtures() {
        let out: Value = serde_json::from_slice(&run_fixture(&job).stdout).unwrap();
        let errors: Vec<String> = v.iter_errors(&out).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", job.display());
    }
}

#[test]
fn fixture_jobs_round_trip() {
    for job in fixtures() {
        let text = std::fs::read_to_string(&job).unwrap();
        let parsed = parse_job(&text).unwrap();
        assert_eq!(parse_job(&parsed.to_string()).unwrap(), parsed, "{}", job.display());
    }
}

#[test]
fn reruns_are_byte_identical() {
    for job in fixtures() {
        assert_eq!(run_fixture(&job).stdout, run_fixture(&job).stdout, "{}", job.display());
    }
    let scan = root().join("fixtures/scan_global.job");
    let one = brauer(&["--json", "--workers", "1", "--file", scan.to_str().unwrap()], None);
    let four = brauer(&["--json", "--workers", "4", "--file", scan.to_str().unwrap()], None);
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["inputs"]["options"].as_object_mut().unwrap().remove("workers");
        v
    };
    assert_eq!(strip(&one), strip(&four));
}

#[test]
fn reads_standard_input_and_renders_text() {
    let out = brauer(&[], Some("field: Fq(5,1)(x)((y))\nclass(n=2): 1*(x,g) + 1*(x+1,y)\nverb: index\n"));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("  exponent: 2"), "{text}");
    assert!(text.contains("  index: 4"), "{text}");
}

#[test]
fn flags_override_job_options() {
    let job = "field: Fq(5,1)(t)\nverb: scan\nsamples: 5\n";
    let out = brauer(&["--json", "--samples", "7", "--seed", "3"], Some(job));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["samples"], 7);
    assert_eq!(v["results"]["seed"], 3);
}

#[test]
fn exit_codes() {
    // syntax error: position on stderr, exit 1
    let out = brauer(&[], Some("field: Fq(5,1)(x)\nclass(n=2): (x, \nverb: index\n"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    // semantic error
    let out = brauer(&[], Some("field: Fq(4,1)\nverb: index\n"));
    assert_eq!(out.status.code(), Some(1));
    // typed domain error from the library: wild modulus for surgery
    let out = brauer(&[], Some("field: Fq(5,1)(x)(y)\nclass(n=4): (x, y)\nverb: surgery\n"));
    assert_eq!(out.status.code(), Some(1));
    // search budget exhausted
    let out = brauer(&["--budget", "1"], Some("field: Fq(5,1)(t)\nclass(n=2): (t^2+2, t)\nverb: split\n"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("search exhausted"));
}
