use std::fs;
use std::process::Command as Process;

use mlk_cli::{parse_jobspec, run, run_text, Command, ErrorCode, Report, RunOptions};

const SP4_MODIFY: &str = r#"{"root_datum":"Sp4","Q":{"alpha1_vee":1,"alpha2_vee":2},"n":2,"command":"modify"}"#;

fn codes(text: &str) -> Vec<ErrorCode> {
    parse_jobspec(text).unwrap_err().into_iter().map(|e| e.code).collect()
}

fn report(text: &str) -> Report {
    run_text(text, &RunOptions::default()).unwrap()
}

#[test]
fn accepts_documented_examples() {
    let job = parse_jobspec(SP4_MODIFY).unwrap();
    assert_eq!(job.n, 2);
    assert_eq!(job.command, Some(Command::Modify));
    let sl2 = parse_jobspec(r#"{"root_datum":"SL2","Q":{"alpha1_vee":1},"n":1,"command":"modify"}"#).unwrap();
    let r = run(&sl2, &RunOptions::default()).unwrap();
    let m = &r.sections["modify"];
    assert_eq!(m["y_tilde_equals_y"], true);
    assert_eq!(m["modified_coroots"], serde_json::json!([[1]]));
    assert_eq!(m["bar_y"]["group"], "0");
}

#[test]
fn error_codes() {
    assert_eq!(codes(r#"{"root_datum":"SL2","Q":{"alpha1_vee":1},"command":"modify"}"#), [ErrorCode::MissingField]);
    assert_eq!(codes(r#"{"root_datum":"SL2","Q":{"alpha1_vee":1},"n":2.5}"#), [ErrorCode::NotInteger]);
    assert_eq!(codes(r#"{"root_datum":"SL9","Q":{"alpha1_vee":1},"n":2}"#), [ErrorCode::UnknownPreset]);
    assert_eq!(codes(r#"{"root_datum":"SL2","Q":[1],"n":2}"#), [ErrorCode::WrongShape]);
    assert_eq!(codes(r#"{"root_datum":"SL2","Q":{"alpha1_vee":1},"n":2,"C":[[1,0]]}"#), [ErrorCode::WrongShape]);
    assert_eq!(codes(r#"{"root_datum":"SL2","Q":{"alpha1_vee":1},"n":2,"field":{"p":4}}"#), [ErrorCode::BadValue]);
    assert_eq!(codes(r#"{"root_datum":"SL2","Q":{"alpha1_vee":1},"n":2,"command":"dance"}"#), [ErrorCode::BadValue]);
    assert_eq!(codes(r#"{"root_datum":"SL2""#), [ErrorCode::Parse]);

    let text = "{\n  \"root_datum\": \"SL2\",\n  \"Q\": {\"alpha1_vee\": 1},\n  \"n\": 2,\n  \"colour\": 3\n}";
    let errs = parse_jobspec(text).unwrap_err();
    assert_eq!(errs.len(), 1);
    assert_eq!((errs[0].code, errs[0].line), (ErrorCode::UnknownKey, Some(5)));
    assert!(errs[0].to_string().starts_with("E_UNKNOWN_KEY at line 5"));

    // Several problems are reported together.
    let errs = codes(r#"{"root_datum":"SL2","Q":{"alpha1_vee":"x"},"n":"two","extra":1}"#);
    assert!(errs.contains(&ErrorCode::UnknownKey) && errs.contains(&ErrorCode::NotInteger));
}

#[test]
fn run_time_input_errors() {
    let opts = RunOptions::default();
    // Not Weyl-invariant.
    let e = run_text(r#"{"root_datum":"Sp4","Q":{"alpha1_vee":1,"alpha2_vee":1},"n":2,"command":"modify"}"#, &opts);
    assert_eq!(e.unwrap_err()[0].code, ErrorCode::BadValue);
    // Not a bisector of Q.
    let e = run_text(r#"{"root_datum":"GL1","Q":{"values":[1]},"n":2,"C":[[0]],"command":"bisector"}"#, &opts);
    assert_eq!(e.unwrap_err()[0].code, ErrorCode::BadValue);
    // mu_3 is not in Q_3.
    let e = run_text(r#"{"root_datum":"GL1","Q":{"values":[1]},"n":3,"field":{"p":3},"command":"verify"}"#, &opts);
    assert_eq!(e.unwrap_err()[0].code, ErrorCode::BadValue);
    // No command anywhere.
    let e = run_text(r#"{"root_datum":"GL1","Q":{"values":[1]},"n":2}"#, &opts);
    assert_eq!(e.unwrap_err()[0].code, ErrorCode::MissingField);
}

#[test]
fn sp4_modify_reports_dual_and_bar_y() {
    let r = report(SP4_MODIFY);
    assert!(r.passed);
    let text = r.to_text();
    assert!(text.contains("C2 (Sp4)"), "{text}");
    assert!(text.contains("barY = Z/2"), "{text}");
    assert!(r.to_json().contains("barY = Z/2"));
    let m = &r.sections["modify"];
    assert_eq!(m["modified_coroots"][0], serde_json::json!([2, 0]));
    assert_eq!(m["bar_y"]["coroot_images"][0], serde_json::json!([1]));
}

#[test]
fn verify_examples() {
    let sl2 = report(r#"{"root_datum":"SL2","Q":{"alpha1_vee":1},"n":1,"field":{"p":3},"command":"verify"}"#);
    assert!(sl2.passed);
    assert!(sl2.suites.iter().any(|s| s.label.starts_with("odd degree")));

    let gl1 = report(r#"{"root_datum":"GL1","Q":{"values":[1]},"n":2,"field":{"p":3},"command":"verify"}"#);
    assert!(gl1.passed);
    for label in ["OT1", "OT2", "OT3", "TO1", "TO2", "TO3", "Com1", "Com2"] {
        let s = gl1.suites.iter().find(|s| s.label == label).unwrap();
        assert!(s.checked > 0);
    }
    for k in 0..2 {
        for t in ["Triv1", "Triv2", "Triv3"] {
            assert!(gl1.suites.iter().any(|s| s.label == format!("[kappa {k}] {t}") && s.checked > 0));
        }
    }
}

#[test]
fn unfair_bisector_is_a_witness() {
    let r = report(r#"{"root_datum":"Sp4","Q":{"alpha1_vee":1,"alpha2_vee":2},"n":2,"C":[[1,0],[0,1]],"command":"bisector"}"#);
    assert!(!r.passed);
    assert_eq!(r.sections["bisector"]["is_fair"], false);
}

#[test]
fn json_round_trip_and_determinism() {
    let text = r#"{"root_datum":"SL2","Q":{"alpha1_vee":1},"n":2,"field":{"p":5},"psi":{"conductor":1,"unit":2},"command":"report"}"#;
    let a = report(text);
    let json = a.to_json();
    assert_eq!(Report::from_json(&json).unwrap(), a);
    assert_eq!(report(text).to_json(), json);
    assert_eq!(a.schema_version, 1);
}

#[test]
fn command_line_override_and_window() {
    let opts = RunOptions { command: Some(Command::Tetractor), window: Some(2) };
    let r = run_text(SP4_MODIFY, &opts).unwrap();
    assert_eq!(r.command, "tetractor");
    assert_eq!(r.settings.window, 2);
    assert_eq!(r.sections["tetractor"]["count"], 2);
}

fn mlk(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_mlk")).args(args).output().unwrap()
}

#[test]
fn binary_exit_codes_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    let out = dir.path().join("out.json");
    fs::write(&job, SP4_MODIFY).unwrap();
    let job_s = job.to_str().unwrap();

    let o = mlk(&["--job", job_s, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written = fs::read_to_string(&out).unwrap();
    assert!(Report::from_json(&written).unwrap().passed);

    let o = mlk(&["modify", "--job", job_s, "--format", "text"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("dual type = C2 (Sp4)"));

    fs::write(&job, r#"{"root_datum":"Sp4","Q":{"alpha1_vee":1,"alpha2_vee":2},"n":2,"C":[[1,0],[0,1]]}"#).unwrap();
    assert_eq!(mlk(&["bisector", "--job", job_s]).status.code(), Some(1));

    fs::write(&job, r#"{"root_datum":"Sp4","Q":{"alpha1_vee":1,"alpha2_vee":2}}"#).unwrap();
    let o = mlk(&["modify", "--job", job_s]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("E_MISSING_FIELD"));

    assert_eq!(mlk(&["modify", "--job", dir.path().join("nope.json").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn thread_bound_is_respected() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    fs::write(&job, r#"{"root_datum":"GL1","Q":{"values":[1]},"n":2,"command":"verify"}"#).unwrap();
    let run_with = |threads: &str| {
        Process::new(env!("CARGO_BIN_EXE_mlk"))
            .args(["--job", job.to_str().unwrap()])
            .env("MLK_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run_with("1");
    let four = run_with("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run_with("zero").status.code(), Some(2));
}
