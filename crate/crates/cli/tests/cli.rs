// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

const SPECIAL_RADIUS: f64 = 1.3169578969248166; // ln(2 + sqrt 3)

fn iwasawa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iwasawa")).args(args).env_remove("IWASAWA_SEED").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn families_in(md: &str) -> Vec<String> {
    let mut seen: Vec<String> = Vec::new();
    for line in md.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| family")) {
        let name = line.split('|').nth(1).unwrap().trim().to_string();
        if !seen.contains(&name) {
            seen.push(name);
        }
    }
    seen
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn table_lists_six_families_for_n3() {
    let out = iwasawa(&["table", "--n", "3", "--r", "1.0", "--format", "md"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(families_in(&text), ["A", "B", "H", "S", "W_pi/2", "W_phi"]);
    assert!(!text.contains('\r'));
}

#[test]
fn table_omits_w_families_for_n2() {
    let out = iwasawa(&["table", "--n", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(families_in(&stdout(&out)), ["A", "B", "H", "S"]);
}

#[test]
fn table_rejects_n1() {
    let out = iwasawa(&["table", "--n", "1"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn table_output_is_byte_stable() {
    for format in ["md", "csv", "json"] {
        let args = ["table", "--n", "4", "--r", "0.7", "--format", format];
        let first = iwasawa(&args);
        let second = iwasawa(&args);
        assert_eq!(code(&first), 0);
        assert_eq!(first.stdout, second.stdout, "format {format}");
    }
}

#[test]
fn table_json_is_well_formed() {
    let out = iwasawa(&["table", "--n", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc.is_object());
}

#[test]
fn sweep_w_phi_matches_numeric() {
    let args = "sweep --family wphi --n 3 --k 2 --phi 0.7853981633974483 --r-min 0.1 --r-max 5 --steps 100";
    let out = iwasawa(&args.split_whitespace().collect::<Vec<_>>());
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let (header, rows) = csv_rows(&text);
    assert_eq!(header.first().map(String::as_str), Some("r"));
    assert_eq!(header.last().map(String::as_str), Some("max_diff"));
    assert_eq!(rows.len(), 100);
    assert!((rows[0][0] - 0.1).abs() < 1e-15);
    assert!((rows[99][0] - 5.0).abs() < 1e-15);
    for row in &rows {
        assert_eq!(row.len(), header.len());
        assert!(*row.last().unwrap() <= 1e-9, "row {row:?}");
    }
}

#[test]
fn sweep_w_pi2_crosses_special_radius() {
    let out = iwasawa(&[
        "sweep", "--family", "wpi2", "--n", "4", "--k", "3", "--r-min", "1.0", "--r-max", "1.6", "--steps", "31",
    ]);
    assert_eq!(code(&out), 0);
    let (_, rows) = csv_rows(&stdout(&out));
    let smallest: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    assert!(smallest.first().unwrap() < &0.0);
    assert!(smallest.last().unwrap() > &0.0);
    assert!(rows.iter().all(|r| *r.last().unwrap() <= 1e-9));
}

#[test]
fn sweep_zero_length_range_is_header_only() {
    let out = iwasawa(&["sweep", "--family", "b", "--n", "3", "--r-min", "1", "--r-max", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 1);
    let out = iwasawa(&["sweep", "--family", "b", "--n", "3", "--r-min", "1", "--r-max", "2", "--steps", "0"]);
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn verify_default_passes_with_two_flags() {
    let out = iwasawa(&["verify"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["summary"]["fail"], 0);
    assert_eq!(doc["summary"]["flagged"], 2);
    assert_eq!(doc["seed"], 20_240_601);
}

#[test]
fn verify_tiny_tolerance_fails() {
    let out = iwasawa(&["verify", "--tol", "1e-20"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["tolerance-override"], 1e-20);
}

#[test]
fn verify_is_deterministic_per_seed() {
    let first = iwasawa(&["verify", "--seed", "42"]);
    let second = iwasawa(&["verify", "--seed", "42"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn verify_reads_seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_iwasawa")).arg("verify").env("IWASAWA_SEED", "7").output().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["seed"], 7);
}

#[test]
fn verify_rejects_negative_tolerance() {
    assert_eq!(code(&iwasawa(&["verify", "--tol", "-1"])), 2);
}

#[test]
fn verify_report_matches_schema() {
    let schema_path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/verify-report.schema.json");
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for args in [&["verify"][..], &["verify", "--tol", "1e-20"][..]] {
        let out = iwasawa(args);
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{errors:?}");
    }
}

#[test]
fn spectrum_at_special_radius() {
    let r = SPECIAL_RADIUS.to_string();
    let out = iwasawa(&["spectrum", "--family", "wpi2", "--n", "4", "--k", "3", "--r", &r, "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = doc.to_string();
    assert!(text.contains("closed"), "{text}");

    let out = iwasawa(&["spectrum", "--family", "wpi2", "--n", "4", "--k", "3", "--r", &r]);
    let md = stdout(&out);
    let s3 = 3f64.sqrt();
    for (value, mult) in [(0.0, 1), (s3 / 6.0, 3), (s3 / 2.0, 3)] {
        let cell = format!("| {value:.10} | {mult} |");
        assert!(md.contains(&cell), "missing {cell} in\n{md}");
    }
}

#[test]
fn spectrum_h_in_ch2() {
    let out = iwasawa(&["spectrum", "--family", "h", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let md = stdout(&out);
    assert!(md.contains("| 0.5000000000 | 2 |"));
    assert!(md.contains("| 1.0000000000 | 1 |"));
}

#[test]
fn spectrum_rejects_w_phi_at_right_angle() {
    let out = iwasawa(&["spectrum", "--family", "wphi", "--n", "3", "--k", "2", "--phi", "1.5707963267948966"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn degrees_and_radians_agree() {
    let deg = iwasawa(&["spectrum", "--family", "wphi", "--n", "3", "--phi-deg", "30", "--format", "csv"]);
    let rad = iwasawa(&["spectrum", "--family", "wphi", "--n", "3", "--phi", "0.5235987755982988", "--format", "csv"]);
    assert_eq!(code(&deg), 0);
    assert_eq!(deg.stdout, rad.stdout);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(code(&iwasawa(&["frobnicate"])), 2);
}
