//! End-to-end tests of the `fuzzmet` binary: output formats, determinism
//! and the exit-code contract (0 ok, 2 schema, 3 dimension, 4 implication
//! violation).

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fuzzmet"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_doc(name: &str, doc: &Value) -> PathBuf {
    let path = tmp(name);
    fs::write(&path, serde_json::to_string(doc).unwrap()).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn crisp_doc(points: &[f64]) -> Value {
    json!({
        "dim": 1,
        "levels": [1.0],
        "cuts": [points.iter().map(|&p| vec![p]).collect::<Vec<_>>()],
    })
}

#[test]
fn dist_hend_on_crisp_escaping_pair_prints_one() {
    let a = write_doc("pair_a.json", &crisp_doc(&[0.0, 7.0]));
    let b = write_doc("pair_b.json", &crisp_doc(&[0.0]));
    let out = bin()
        .args(["dist", "--metric", "hend"])
        .arg(&a)
        .arg(&b)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1.000000000000\n");
}

#[test]
fn dist_identical_files_print_zero() {
    let a = write_doc("same.json", &crisp_doc(&[0.0, 2.0]));
    for metric in ["hausdorff", "hend", "send"] {
        let out = bin()
            .args(["dist", "--metric", metric])
            .arg(&a)
            .arg(&a)
            .output()
            .unwrap();
        assert!(out.status.success(), "{metric}");
        assert_eq!(stdout(&out), "0.000000000000\n", "{metric}");
    }
    let out = bin()
        .args(["dist", "--metric", "dp", "--p", "2"])
        .arg(&a)
        .arg(&a)
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "0.000000000000\n");
}

#[test]
fn dist_dp_matches_interval_sum_oracle() {
    // Plateau member at n = 2 against the crisp singleton:
    // d_2^2 = (1/2) 2^2 + (1/2)(1/2)^2.
    let un = json!({
        "dim": 1,
        "levels": [0.5, 1.0],
        "cuts": [
            [[0.0], [0.5], [2.0]],
            [[0.0], [0.5]],
        ],
    });
    let a = write_doc("dphe2.json", &un);
    let b = write_doc("limit.json", &crisp_doc(&[0.0]));
    let out = bin()
        .args(["dist", "--metric", "dp", "--p", "2"])
        .arg(&a)
        .arg(&b)
        .output()
        .unwrap();
    assert!(out.status.success());
    let expected = format!("{:.12}\n", (0.5 * 4.0 + 0.5 * 0.25f64).sqrt());
    assert_eq!(stdout(&out), expected);
}

#[test]
fn dist_requires_p_exactly_for_dp() {
    let a = write_doc("p_rule.json", &crisp_doc(&[0.0]));
    let out = bin()
        .args(["dist", "--metric", "dp"])
        .arg(&a)
        .arg(&a)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("p:"));
    let out = bin()
        .args(["dist", "--metric", "hend", "--p", "2"])
        .arg(&a)
        .arg(&a)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn schema_violations_exit_2_and_name_the_field() {
    // Levels out of order.
    let bad = json!({
        "dim": 1,
        "levels": [0.8, 0.4],
        "cuts": [[[0.0]], [[0.0]]],
    });
    let path = write_doc("bad_levels.json", &bad);
    let ok = write_doc("ok.json", &crisp_doc(&[0.0]));
    let out = bin()
        .args(["dist", "--metric", "hend"])
        .arg(&path)
        .arg(&ok)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("levels"), "stderr: {}", stderr(&out));

    // Broken nesting.
    let bad = json!({
        "dim": 1,
        "levels": [0.5, 1.0],
        "cuts": [[[0.0]], [[4.0]]],
    });
    let path = write_doc("bad_nesting.json", &bad);
    let out = bin()
        .args(["dist", "--metric", "hend"])
        .arg(&path)
        .arg(&ok)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cuts"), "stderr: {}", stderr(&out));

    // Unknown field.
    let path = tmp("unknown_field.json");
    fs::write(
        &path,
        r#"{"dim":1,"levels":[1.0],"cuts":[[[0.0]]],"extra":1}"#,
    )
    .unwrap();
    let out = bin()
        .args(["dist", "--metric", "hend"])
        .arg(&path)
        .arg(&ok)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dimension_mismatch_exits_3() {
    let a = write_doc("dim1.json", &crisp_doc(&[0.0]));
    let b = write_doc(
        "dim2.json",
        &json!({"dim": 2, "levels": [1.0], "cuts": [[[0.0, 0.0]]]}),
    );
    let out = bin()
        .args(["dist", "--metric", "hend"])
        .arg(&a)
        .arg(&b)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("dimension mismatch"));
}

#[test]
fn classify_reports_expected_labels() {
    let crisp = write_doc("classify_crisp.json", &crisp_doc(&[0.0]));
    let out = bin().arg("classify").arg(&crisp).output().unwrap();
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["labels"]
        .as_array()
        .unwrap()
        .iter()
        .any(|l| l == "E"));

    let escaping = write_doc("classify_gse.json", &crisp_doc(&[0.0, 6.0]));
    let out = bin().arg("classify").arg(&escaping).output().unwrap();
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["all_cuts_connected"], Value::Bool(false));
    assert!(report["labels"]
        .as_array()
        .unwrap()
        .iter()
        .all(|l| l != "E"));
    assert!(report["labels"]
        .as_array()
        .unwrap()
        .iter()
        .any(|l| l == "F_USCB"));

    let empty = write_doc(
        "classify_empty.json",
        &json!({"dim": 1, "levels": [], "cuts": []}),
    );
    let out = bin().arg("classify").arg(&empty).output().unwrap();
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["empty"], Value::Bool(true));
    assert!(report["labels"]
        .as_array()
        .unwrap()
        .iter()
        .any(|l| l == "F_USCB"));
}

#[test]
fn analyze_escaping_family_verdicts_and_csv() {
    let out_path = tmp("gse_table.csv");
    let out = bin()
        .args([
            "analyze",
            r#"{"kind":"gse","dim":1,"n_min":1,"n_max":50}"#,
            "--out",
        ])
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let verdict: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(verdict["gamma"], "yes");
    assert_eq!(verdict["hend"], "no");
    assert_eq!(verdict["bounded"], "no");

    let csv = fs::read_to_string(&out_path).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "n,alpha,a_n,b_n@1,b_n@4,b_n@16,b_n@64,H_cut,H_end,d_p,sendograph"
    );

    // Idempotent given the seed, and independent of the thread cap: the
    // same invocation reproduces both the verdict and the CSV byte for
    // byte.
    let out2_path = tmp("gse_table_2.csv");
    let out2 = bin()
        .env("FUZZMET_THREADS", "2")
        .args([
            "analyze",
            r#"{"kind":"gse","dim":1,"n_min":1,"n_max":50}"#,
            "--out",
        ])
        .arg(&out2_path)
        .output()
        .unwrap();
    assert_eq!(stdout(&out), stdout(&out2));
    assert_eq!(csv, fs::read_to_string(&out2_path).unwrap());
}

#[test]
fn analyze_plateau_family_separates_hend_from_dp() {
    let out_path = tmp("dphe_table.csv");
    let out = bin()
        .args([
            "analyze",
            r#"{"kind":"dphe","dim":1,"n_min":2,"n_max":50}"#,
            "--out",
        ])
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let verdict: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(verdict["hend"], "yes");
    assert_eq!(verdict["dp"], "no");
}

#[test]
fn analyze_translate_family_all_yes() {
    let out_path = tmp("translate_table.csv");
    let out = bin()
        .args([
            "analyze",
            r#"{"kind":"translate","dim":1,"n_min":1,"n_max":16,"seed":5}"#,
            "--out",
        ])
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let verdict: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in ["dp", "hend", "gamma", "bounded", "support_bounded"] {
        assert_eq!(verdict[key], "yes", "{key}");
    }
}

#[test]
fn analyze_rejects_invalid_spec() {
    let out = bin()
        .args([
            "analyze",
            r#"{"kind":"gse","dim":2,"n_min":1,"n_max":5}"#,
            "--out",
        ])
        .arg(tmp("never.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn net_escaping_family_needs_every_member() {
    let out = bin()
        .args([
            "net",
            "--eps",
            "0.333",
            r#"{"kind":"gse","dim":1,"n_min":1,"n_max":6}"#,
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let net: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(net["centers"].as_array().unwrap().len(), 6);

    // The endograph metric is capped at 1, so eps >= 1 needs one center.
    let out = bin()
        .args([
            "net",
            "--eps",
            "1.0",
            r#"{"kind":"gse","dim":1,"n_min":1,"n_max":6}"#,
        ])
        .output()
        .unwrap();
    let net: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(net["centers"].as_array().unwrap().len(), 1);
}

#[test]
fn net_accepts_document_arrays_and_rejects_garbage() {
    let family = json!([crisp_doc(&[0.0]), crisp_doc(&[0.01]), crisp_doc(&[0.02]),]);
    let path = tmp("family_docs.json");
    fs::write(&path, serde_json::to_string(&family).unwrap()).unwrap();
    let out = bin()
        .args(["net", "--eps", "0.5"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let net: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(net["centers"], json!([0]));
    assert_eq!(net["assignment"], json!([0, 0, 0]));

    let out = bin()
        .args(["net", "--eps", "0.5", "not json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1)); // unreadable as a file
    let out = bin()
        .args(["net", "--eps", "0.5", "{\"bad\":1}"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn document_round_trip_is_value_stable() {
    let doc = json!({
        "dim": 2,
        "levels": [0.25, 1.0],
        "cuts": [
            [[0.0, 0.0], [0.125, 0.0], [1.0 / 3.0, 0.7]],
            [[0.125, 0.0]],
        ],
    });
    let path = write_doc("round_trip.json", &doc);
    let reread: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(reread, doc);
    // And the document is accepted by the binary.
    let out = bin()
        .args(["dist", "--metric", "hend"])
        .arg(&path)
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
}
