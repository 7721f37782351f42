//! Integration tests for the command-line surface: file parsing with
//! schema-path errors, the parse/serialize round trip, report shapes,
//! and exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

use orbigw_cli::schema::{parse_target, target_json, CliError};
use orbigw_core::group::DEFAULT_ORDER_CAP;
use orbigw_core::invariants::Target;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orbigw"))
}

fn parse(path: &Path) -> Target {
    parse_target(path, None, DEFAULT_ORDER_CAP).unwrap_or_else(|e| panic!("{e}"))
}

#[test]
fn corpus_parses_and_round_trips() {
    let mut checked = 0;
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().map(|e| e != "json").unwrap_or(true) {
            continue;
        }
        let target = parse(&path);
        let serialized = serde_json::to_string_pretty(&target_json(&target)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let round = dir.path().join("round.json");
        std::fs::write(&round, serialized).unwrap();
        let reparsed = parse(&round);
        assert_eq!(target, reparsed, "{}", path.display());
        checked += 1;
    }
    assert_eq!(checked, 20, "all corpus files round-trip");
}

#[test]
fn bundled_examples_have_expected_shape() {
    // quotient model of a point with the order-6 nonabelian group
    match parse(&corpus_dir().join("bg_s3.json")) {
        Target::Q(model) => {
            assert_eq!(model.group.order(), 6);
            assert!(model.euler_table.values().all(|&chi| chi == 1));
        }
        _ => panic!("bg_s3.json is a quotient model"),
    }
    // localization model of the sign quotient of the line
    match parse(&corpus_dir().join("p1_z2.json")) {
        Target::L(model) => {
            assert_eq!(model.rank, 1);
            assert_eq!(model.points.len(), 2);
        }
        _ => panic!("p1_z2.json is a localization model"),
    }
}

fn write_temp(content: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("target.json");
    std::fs::write(&path, content).unwrap();
    (dir, path)
}

fn schema_error(content: &str) -> (String, String) {
    let (_dir, path) = write_temp(content);
    match parse_target(&path, None, DEFAULT_ORDER_CAP) {
        Err(CliError::Schema { path, message, .. }) => (path, message),
        other => panic!("expected schema error, got {other:?}"),
    }
}

#[test]
fn errors_name_the_schema_path() {
    // missing conjugacy-class key inside a character
    let (path, message) = schema_error(
        r#"{"format_version": 1, "model": "L", "torus_rank": 0, "twist_order": 1,
            "fixed_points": [{"label": "pt",
              "group": {"permutation_generators": [[[1,2]]]},
              "tangent": [],
              "bundle": [{"tweight": [], "dim": 1, "character": {"0": ["1"]}}]}]}"#,
    );
    assert_eq!(path, "fixed_points[0].bundle[0].character");
    assert!(message.contains("representative 1"), "{message}");

    // wrong lift arity
    let (path, _) = schema_error(
        r#"{"format_version": 1, "model": "L", "torus_rank": 2, "twist_order": 1,
            "fixed_points": [{"label": "pt",
              "group": {"cayley": [[0]]},
              "tangent": [{"tweight": [1, 0], "dim": 1, "character": {"0": ["1"]}}],
              "divisor_lift": {"t": ["1"]}}]}"#,
    );
    assert_eq!(path, "fixed_points[0].divisor_lift.t");

    // malformed rational in a divisor table
    let (path, message) = schema_error(
        r#"{"format_version": 1, "model": "Q",
            "group": {"cayley": [[0]]},
            "euler_table": {"0": 1},
            "divisor_table": {"0": "1/0"}}"#,
    );
    assert_eq!(path, "divisor_table.0");
    assert!(message.contains("rational"), "{message}");

    // unknown field
    let (path, _) = schema_error(
        r#"{"format_version": 1, "model": "Q",
            "group": {"cayley": [[0]]},
            "euler_table": {"0": 1},
            "euler": {}}"#,
    );
    assert_eq!(path, "(root)");

    // character value at the identity disagreeing with the dimension
    let (path, message) = schema_error(
        r#"{"format_version": 1, "model": "L", "torus_rank": 0, "twist_order": 1,
            "fixed_points": [{"label": "pt",
              "group": {"cayley": [[0]]},
              "tangent": [{"tweight": [], "dim": 2, "character": {"0": ["1"]}}]}]}"#,
    );
    assert_eq!(path, "fixed_points[0].tangent[0]");
    assert!(message.contains("dimension"), "{message}");
}

#[test]
fn euler_table_must_cover_every_class() {
    // the Klein four-group has five bicyclic classes; drop one
    let (_dir, path) = write_temp(
        r#"{"format_version": 1, "model": "Q",
            "group": {"permutation_generators": [[[1,2]], [[3,4]]]},
            "euler_table": {"0": 1, "0,1": 1, "0,2": 1, "0,3": 1}}"#,
    );
    match parse_target(&path, None, DEFAULT_ORDER_CAP) {
        Err(CliError::Model { message }) => {
            assert!(message.contains("0,1,2,3"), "names the missing key: {message}");
        }
        other => panic!("expected model error, got {other:?}"),
    }
}

#[test]
fn non_canonical_table_key_is_rejected() {
    let (_dir, path) = write_temp(
        r#"{"format_version": 1, "model": "Q",
            "group": {"permutation_generators": [[[1,2]], [[1,2,3]]]},
            "euler_table": {"0": 1, "0,3": 1, "0,2,5": 1}}"#,
    );
    match parse_target(&path, None, DEFAULT_ORDER_CAP) {
        Err(CliError::Model { message }) => {
            assert!(message.contains("canonical"), "{message}");
        }
        other => panic!("expected model error, got {other:?}"),
    }
}

#[test]
fn order_cap_env_is_honored() {
    let out = binary()
        .arg("group-info")
        .arg(corpus_dir().join("bg_a4.json"))
        .env("ORBIGW_ORDER_CAP", "6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("order cap"));
}

#[test]
fn dilaton_report_shape_and_exit() {
    let out = binary()
        .arg("dilaton")
        .arg(corpus_dir().join("bg_s3.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["value"], "1/8");
    assert_eq!(report["routes"]["B"], "1/8");
    assert_eq!(report["routes"]["B'"], "1/8");
    assert_eq!(report["agree"], Value::Bool(true));
    // breakdown appears only on request
    assert!(report.get("components").is_none());

    let out = binary()
        .arg("dilaton")
        .arg(corpus_dir().join("bg_s3.json"))
        .arg("--breakdown")
        .output()
        .unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["components"].as_array().unwrap().len(), 3);
}

#[test]
fn divisor_reports_and_flags_bad_lifts() {
    let out = binary()
        .arg("divisor")
        .arg(corpus_dir().join("p1.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["value"], "-1/24");
    assert_eq!(report["constancy"], Value::Bool(true));

    // corrupt the lift so the total depends on the torus parameter
    let text = std::fs::read_to_string(corpus_dir().join("p1.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["fixed_points"][0]["divisor_lift"]["const"] = Value::String("1".into());
    let (_dir, path) = write_temp(&doc.to_string());
    let out = binary().arg("divisor").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("invalid lift"));
}

#[test]
fn twisted_requires_localization_model_and_bundle() {
    let out = binary()
        .arg("twisted")
        .arg(corpus_dir().join("bg_s3.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = binary()
        .arg("twisted")
        .arg(corpus_dir().join("p1_z2.json"))
        .arg("--k")
        .arg("1")
        .arg("--jmax")
        .arg("2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["k"], 1);
    assert_eq!(report["twist_order"], 2);
    assert_eq!(report["lhs_equals_rhs_variant"], Value::Bool(true));
}

#[test]
fn check_reports_cross_target_agreement() {
    let out = binary()
        .arg("check")
        .arg(corpus_dir().join("p1_z2.json"))
        .arg(corpus_dir().join("p1_z2_q.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["all_pass"], Value::Bool(true));
    let checks = report["checks"].as_array().unwrap();
    let cross: Vec<&Value> = checks
        .iter()
        .filter(|c| c["name"].as_str().unwrap().starts_with("cross_target"))
        .collect();
    assert_eq!(cross.len(), 2);
    assert!(cross.iter().all(|c| c["outcome"] == "pass"));
    let dilaton = cross
        .iter()
        .find(|c| c["name"] == "cross_target_dilaton_agreement")
        .unwrap();
    assert!(dilaton["witness"].as_str().unwrap().contains("1/6"));
}

#[test]
fn check_disagreement_fails_with_exit_one() {
    // a quotient model of the same group with doubled Euler data does
    // not agree with the honest localization model
    let text = std::fs::read_to_string(corpus_dir().join("p1_z2_q.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["euler_table"]["0"] = Value::from(4);
    doc["euler_table"]["0,1"] = Value::from(4);
    let (_dir, path) = write_temp(&doc.to_string());
    let out = binary()
        .arg("check")
        .arg(corpus_dir().join("p1_z2.json"))
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["all_pass"], Value::Bool(false));
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = binary()
        .arg("dilaton")
        .arg(corpus_dir().join("point.json"))
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(report["value"], "1/24");
}

#[test]
fn group_info_lists_structure() {
    let out = binary()
        .arg("group-info")
        .arg(corpus_dir().join("bg_v4.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let g = &report["groups"][0];
    assert_eq!(g["order"], 4);
    assert_eq!(g["commuting_pairs"], 16);
    assert_eq!(g["bi_conjugacy_classes"].as_array().unwrap().len(), 16);
    assert_eq!(g["bicyclic_subgroups"]["distinct_count"], 5);
}
