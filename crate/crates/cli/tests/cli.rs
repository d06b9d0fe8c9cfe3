use std::path::Path;
use std::process::{Command, Output};

use occert_cli::Report;

fn occert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_occert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn certify_to(out: &Path, metric: &str, extra: &[&str]) -> Output {
    let mut args = vec!["certify", "--metric", metric, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    occert(&args)
}

fn conformal(c: f64) -> String {
    format!(r#"{{"family":"conformal","f":{{"type":"ambient_linear","coeffs":[{c},0,0,0,0,0,0]}}}}"#)
}

fn read_report(path: &Path) -> Report {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn round_metric_certifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let res = certify_to(&out, "round", &["--points", "20"]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let report = read_report(&out);
    assert_eq!(report.points.len(), 20);
    assert_eq!(report.aggregate.exit_code, 0);
}

#[test]
fn large_conformal_perturbation_is_not_certified() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let res = certify_to(&out, &conformal(0.5), &["--points", "4", "--multistarts", "8"]);
    let code = res.status.code().unwrap();
    assert!(code == 3 || code == 4, "exit {code}");
    let report = read_report(&out);
    assert!(report.points.iter().all(|p| !p.notes.is_empty() || p.bhl.is_some()));
}

#[test]
fn flat_metric_fails_pinching() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let res = certify_to(&out, "flat", &["--points", "3", "--multistarts", "8"]);
    assert_eq!(res.status.code(), Some(4));
    let report = read_report(&out);
    assert!(report.points.iter().all(|p| p.bhl.as_ref().is_some_and(|b| !b.pass)));
}

#[test]
fn unknown_family_is_a_config_error() {
    let res = occert(&["certify", "--metric", r#"{"family":"nope"}"#]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("family"));
}

#[test]
fn missing_spec_file_is_a_config_error() {
    let res = occert(&["certify", "--spec", "/nonexistent/spec.json"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let res = Command::new(env!("CARGO_BIN_EXE_occert"))
        .args(["certify", "--metric", "round", "--points", "1"])
        .env("OCCERT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("r.json");
    let res = certify_to(&out, "round", &["--points", "1", "--checks", "bhl"]);
    assert_eq!(res.status.code(), Some(5));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let spec = conformal(0.2);
    let extra = ["--points", "4", "--seed", "7", "--multistarts", "8"];
    certify_to(&a, &spec, &extra);
    let res = Command::new(env!("CARGO_BIN_EXE_occert"))
        .args(["certify", "--metric", &spec, "--out", b.to_str().unwrap()])
        .args(extra)
        .env("OCCERT_THREADS", "2")
        .output()
        .unwrap();
    assert!(res.status.code().is_some());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn report_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    certify_to(
        &out,
        &conformal(0.3),
        &["--points", "3", "--multistarts", "8", "--checks", "bhl,p_sufficient,p_refute,lemma_ll_demo"],
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(occert_cli::json::to_json_string(&report).unwrap(), text);
    let again: Report = serde_json::from_str(&occert_cli::json::to_json_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn spectrum_subcommand_reports_only_pinching() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let res = occert(&["spectrum", "--metric", "round", "--points", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let report = read_report(&out);
    assert!(report.points.iter().all(|p| p.p_membership.is_none() && p.spectrum.is_some()));
}

#[test]
fn selftest_passes() {
    let res = occert(&["selftest"]);
    assert_eq!(res.status.code(), Some(0));
    let text = String::from_utf8_lossy(&res.stdout);
    assert!(text.lines().all(|l| l.starts_with("[PASS]")));
}

#[test]
fn spec_file_matches_inline_metric() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, conformal(0.01)).unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let args = ["--points", "2", "--checks", "bhl"];
    certify_to(&a, &conformal(0.01), &args);
    let res = occert(&[
        "certify", "--spec", spec.to_str().unwrap(), "--out", b.to_str().unwrap(), "--points", "2", "--checks", "bhl",
    ]);
    assert_eq!(res.status.code(), Some(0));
    let (ra, rb) = (read_report(&a), read_report(&b));
    assert_eq!(ra.points, rb.points);
}
