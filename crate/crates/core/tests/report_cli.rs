use std::process::{Command, Output};

use braidfix::braid::parse_braid;
use braidfix::cli::{cmd_analyze, cmd_pillowcase, CommonArgs, EXIT_OK, EXIT_USAGE};
use braidfix::fixpoint::SolverConfig;
use braidfix::pillowcase::PERTURBATION_CAVEAT;
use braidfix::report::{build_report, LambdaValue, Report};
use serde_json::Value;

fn braidfix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidfix")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn report_round_trips_bit_exactly() {
    for w in ["1 1 1", "1 -2 1 -2", "1 1 1 1 1"] {
        let r = build_report("analyze", &parse_braid(w, None).unwrap(), &SolverConfig::default()).unwrap();
        let json = r.to_json().unwrap();
        let back = Report::from_json(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json().unwrap(), json);
        for (a, b) in r.classes.iter().zip(&back.classes) {
            assert_eq!(a.residual.to_bits(), b.residual.to_bits());
            for (x, y) in a.fingerprint.0.iter().zip(&b.fingerprint.0) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        assert!(r.lambda_matches_signature());
    }
}

#[test]
fn unknown_fields_and_other_versions_are_rejected() {
    let r = build_report("analyze", &parse_braid("1 1 1", None).unwrap(), &SolverConfig::default()).unwrap();
    let mut v: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    v["extra"] = Value::Bool(true);
    assert!(Report::from_json(&v.to_string()).is_err());

    let mut v: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    v["schema_version"] = Value::from(99);
    let err = Report::from_json(&v.to_string()).unwrap_err();
    assert!(err.to_string().contains("schema version"));
}

#[test]
fn undefined_lambda_serializes_as_marker() {
    assert_eq!(serde_json::to_string(&LambdaValue::Undefined).unwrap(), "\"undefined(degenerate)\"");
    assert_eq!(serde_json::from_str::<LambdaValue>("-3").unwrap(), LambdaValue::Defined(-3));
    assert!(serde_json::from_str::<LambdaValue>("\"other\"").is_err());
}

#[test]
fn trefoil_analysis() {
    let out = braidfix(&["analyze", "1 1 1"]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", stderr(&out));
    let v = json_of(&out);
    assert_eq!(v["lambda"].as_i64().map(i64::abs), Some(1));
    assert_eq!(v["signature"], -2);
    assert_eq!(v["determinant"], 3);
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);
    assert_eq!(v["nielsen_bracket"]["lower"], 1);
    assert!(v.get("nielsen_number").is_none());
}

#[test]
fn words_may_start_with_an_inverse_letter() {
    let out = braidfix(&["analyze", "-1 -1 -1"]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", stderr(&out));
    let v = json_of(&out);
    assert_eq!(v["signature"], 2);
    assert_eq!(v["lambda"], 1);
}

#[test]
fn unknot_has_no_classes() {
    let out = braidfix(&["analyze", "1"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v = json_of(&out);
    assert_eq!(v["lambda"], 0);
    assert!(v["classes"].as_array().unwrap().is_empty());
}

#[test]
fn links_are_usage_errors() {
    let out = braidfix(&["analyze", "1 1"]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(stderr(&out).contains("closure is a link"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let out = braidfix(&["analyze", "1 x 2"]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let out = braidfix(&["analyze", "1 1 1", "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["analyze", "1 -2 1 -2", "--seeds", "800", "--rng-seed", "9"];
    let a = braidfix(&args);
    let b = braidfix(&args);
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["rng_seed"], 9);
    assert_eq!(json_of(&a)["solver_config"]["seeds"], 800);
}

#[test]
fn pillowcase_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("trefoil.json");
    let csv = dir.path().join("trefoil.csv");
    let out = braidfix(&[
        "pillowcase",
        "1 1 1",
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let block = &v["pillowcase"];
    let irreducible: Vec<&Value> = block["classes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["kind"] == "irreducible")
        .collect();
    assert_eq!(irreducible.len(), 1);
    assert_eq!(irreducible[0]["alpha"], "1/3 π");
    assert_eq!(block["lift"]["det_i_minus_l"], 0);
    assert_eq!(block["lift"]["caveat"], PERTURBATION_CAVEAT);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("curve,alpha,theta"));

    let out = braidfix(&["pillowcase", "1"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(json_of(&out)["pillowcase"]["irreducible_classes"], 0);

    let out = braidfix(&["pillowcase", "1 2"]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn markov_subcommand() {
    let out = braidfix(&["markov", "1", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", stderr(&out));
    let v = json_of(&out);
    let audits = v["markov_audits"].as_array().unwrap();
    assert_eq!(audits.len(), 3);
    for a in audits {
        assert_eq!(a["passed"], true);
        assert_eq!(a["lambda_after"], 0);
    }
}

#[test]
fn library_entry_points_match_the_binary() {
    let out = cmd_analyze(&CommonArgs::new("1 1 1"));
    assert_eq!(out.exit_code, EXIT_OK);
    let report = out.report.unwrap();
    assert_eq!(report.command, "analyze");
    let csv = out.csv.unwrap();
    assert_eq!(csv.lines().count(), 1 + report.classes.len());

    let out = cmd_pillowcase(&CommonArgs::new("1 2"));
    assert_eq!(out.exit_code, EXIT_USAGE);
    assert!(out.report.is_none());
}
