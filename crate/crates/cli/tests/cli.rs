use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use lacunary_cli::{execute, CertificateDocument, RunConfig};

fn lacunary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lacunary")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lacunary-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn digits_of_the_example() {
    let text = stdout(&lacunary(&["digits"]));
    assert!(text.contains("theta1 (g=2): 0.3125152587\n"));
    assert!(text.contains("sum: 0.4359720721\n"));
    assert_eq!(text.lines().count(), 6);
    let six = stdout(&lacunary(&["digits", "--digits", "6", "--g1", "3", "--g2", "2"]));
    assert!(six.starts_with("theta1 (g=3): 0.123456\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(lacunary(&["digits", "--digits", "0"]).status.code(), Some(2));
    assert_eq!(lacunary(&["digits", "--digits", "40", "--budget-bits", "4"]).status.code(), Some(3));
    assert_eq!(lacunary(&["digits", "--g1", "3", "--g2", "3"]).status.code(), Some(2));
    assert_eq!(lacunary(&["convergents", "--a1", "4", "--beta", "1/2", "--n-to", "3"]).status.code(), Some(2));
    assert_eq!(lacunary(&["measure", "--d", "5/2"]).status.code(), Some(2));
    assert_eq!(lacunary(&["bogus"]).status.code(), Some(2));
    assert_eq!(lacunary(&["digits", "--config", "/nonexistent/config.json"]).status.code(), Some(2));
}

#[test]
fn convergents_listing() {
    let text = stdout(&lacunary(&["convergents", "--n-to", "2"]));
    assert!(text.contains("n=2 a_n=4\n"));
    assert!(text.contains("  sum = 565/1296\n"));
    let diff = stdout(&lacunary(&["convergents", "--op", "difference", "--n-to", "1"]));
    assert!(diff.contains("  difference = 5/36\n"));
}

#[test]
fn witness_documents() {
    let doc = CertificateDocument::from_json(&stdout(&lacunary(&["witness"]))).unwrap();
    assert_eq!(doc.certificate.summary.n0, Some(3));
    assert_eq!(doc.certificate.summary.roth_passes, vec![3, 4]);
    assert_eq!(doc.certificate.records.len(), 4);

    let over = CertificateDocument::from_json(&stdout(&lacunary(&["witness", "--n-to", "7"]))).unwrap();
    assert_eq!(over.certificate.summary.failed_records, 3);
    assert_eq!(over.certificate.records[6].notes, vec!["exponent a_6 exceeds the budget of 2^20"]);
    assert!(over.certificate.threshold_error.is_some());
    assert_eq!(over.certificate.summary.n0, Some(3));

    let empty =
        CertificateDocument::from_json(&stdout(&lacunary(&["witness", "--n-from", "2", "--n-to", "1"]))).unwrap();
    assert!(empty.certificate.records.is_empty());

    let quotient = stdout(&lacunary(&["witness", "--op", "quotient", "--n-to", "2"]));
    let doc = CertificateDocument::from_json(&quotient).unwrap();
    assert_eq!(doc.certificate.records[0].notes, vec!["quotient bounds are only established for n >= 2 (got n = 1)"]);
    assert!(doc.certificate.records[1].gap_bound.is_some());
}

#[test]
fn canonical_json_shape() {
    let text = stdout(&lacunary(&["witness", "--n-to", "3"]));
    assert!(text.ends_with("}\n") && !text.contains("\r"));
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with(r#"{"schema_version":1,"tool_version":""#));
    assert!(text.contains(r#""convergent":{"n":2,"p":"565","q":"1296"}"#));
    assert!(text.contains(r#""d_eff":{"num":"5","den":"2"}"#));
}

#[test]
fn out_flag_and_config_file() {
    let config = scratch("config.json");
    fs::write(&config, r#"{"op":"product","n_to":2,"d":"7/2"}"#).unwrap();
    let out = scratch("witness.json");
    let c = config.to_str().unwrap();
    let o = out.to_str().unwrap();
    let run = lacunary(&["witness", "--config", c, "--n-to", "3", "--out", o]);
    assert!(run.status.success() && run.stdout.is_empty());
    let doc = CertificateDocument::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.config.n_to, 3);
    assert_eq!(doc.certificate.d_eff.to_string(), "11/4");
    assert_eq!(doc.certificate.op, lacunary_core::Op::Product);
    fs::write(&config, r#"{"opp":"sum"}"#).unwrap();
    assert_eq!(lacunary(&["witness", "--config", c]).status.code(), Some(2));
}

#[test]
fn measure_reports() {
    let h1 = stdout(&lacunary(&["measure"]));
    assert!(h1.contains("bound = 1/(18)^13\n"));
    assert!(h1.contains("denominator = 20822964865671168\n"));
    let h3 = stdout(&lacunary(&["measure", "--height", "3"]));
    assert!(h3.contains("  n=2: 6^4 < 2916; 2916 < 6^16\n"));
    assert!(h3.contains("n1 = 2\n"));
    let h2 = stdout(&lacunary(&["measure", "--height", "2"]));
    assert!(h2.contains("warning: exact equality in the left comparison at n = 2"));
    let target = stdout(&lacunary(&["measure", "--poly=-2,0,0,1", "--bracket", "1,2"]));
    assert!(target.contains("xi ~ 1.259921049894"));
    assert!(target.contains("check: pass"));
    assert_eq!(lacunary(&["measure", "--poly=1,0,1", "--bracket", "0,1"]).status.code(), Some(2));
    assert_eq!(lacunary(&["measure", "--poly=-2,0,0,1"]).status.code(), Some(2));
}

#[test]
fn validate_reports() {
    let fail = stdout(&lacunary(&["validate"]));
    assert!(fail.ends_with("failing: 1, 2, 3, 4\n"));
    let pass = stdout(&lacunary(&["validate", "--alpha", "3/2", "--k", "2"]));
    assert!(pass.ends_with("all pass\n"));
    let vacuous = stdout(&lacunary(&["validate", "--n-to", "0"]));
    assert!(vacuous.ends_with("all pass\n"));
}

#[test]
fn library_and_binary_agree() {
    let lib = execute(lacunary_cli::Command::Witness, &RunConfig::default()).unwrap();
    assert_eq!(lib, stdout(&lacunary(&["witness"])));
}
