use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const CASE_I: [&str; 14] = [
    "--n",
    "8",
    "--steps",
    "128",
    "--message",
    "0011",
    "--repeat-message",
    "128",
    "--theta1",
    "0.1",
    "--theta2",
    "0.2",
    "--theta3",
    "0.3",
];

fn qwc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwc"))
        .args(args)
        .env_remove("QWC_THREADS")
        .output()
        .expect("spawn qwc")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn image_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/images")
        .join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn zero_steps_is_localized() {
    let out = qwc(&["walk", "--n", "3", "--steps", "0"]);
    let p: Vec<f64> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(p, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
}

#[test]
fn walk_distribution_is_normalized_for_both_engines() {
    for engine in ["direct", "fourier"] {
        let mut args = vec!["walk", "--engine", engine];
        args.extend(CASE_I);
        let p: Vec<f64> = serde_json::from_str(&stdout(&qwc(&args))).unwrap();
        assert_eq!(p.len(), 256);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn fraction_angles_are_accepted() {
    let out = qwc(&["walk", "--n", "4", "--steps", "3", "--theta1", "157/150"]);
    assert!(out.status.success());
}

#[test]
fn encrypt_then_decrypt_restores_the_file() {
    let dir = TempDir::new().unwrap();
    let plain = image_path("portrait.pgm");
    let cipher = dir.path().join("c.pgm");
    let back = dir.path().join("d.pgm");
    let key = dir.path().join("k.pgm");
    let mut args = vec![
        "encrypt",
        "--in",
        s(&plain),
        "--out",
        s(&cipher),
        "--key-out",
        s(&key),
    ];
    args.extend(CASE_I);
    stdout(&qwc(&args));
    let mut args = vec!["decrypt", "--in", s(&cipher), "--out", s(&back)];
    args.extend(CASE_I);
    stdout(&qwc(&args));
    assert_eq!(
        std::fs::read(&back).unwrap(),
        std::fs::read(&plain).unwrap()
    );
    assert_ne!(
        std::fs::read(&cipher).unwrap(),
        std::fs::read(&plain).unwrap()
    );
    assert!(std::fs::read(&key)
        .unwrap()
        .starts_with(b"P5\n64 64\n255\n"));
}

#[test]
fn keygen_writes_requested_size() {
    let dir = TempDir::new().unwrap();
    let key = dir.path().join("k.pgm");
    stdout(&qwc(&[
        "keygen",
        "--width",
        "20",
        "--height",
        "10",
        "--key-out",
        s(&key),
    ]));
    let bytes = std::fs::read(&key).unwrap();
    assert!(bytes.starts_with(b"P5\n20 10\n255\n"));
    assert_eq!(bytes.len(), 13 + 200);
}

#[test]
fn analyze_reports_all_fields() {
    let plain = image_path("rings.pgm");
    let mut args = vec!["analyze", "--in", s(&plain), "--pairs", "2000"];
    args.extend(CASE_I);
    let v: serde_json::Value = serde_json::from_str(&stdout(&qwc(&args))).unwrap();
    for field in [
        "c_h",
        "c_v",
        "c_d",
        "npcr",
        "uaci",
        "entropy_plain",
        "entropy_cipher",
        "histogram_plain",
        "histogram_cipher",
        "sample_seed",
        "pair_count",
    ] {
        assert!(v.get(field).is_some(), "missing {field}");
    }
    assert_eq!(v["pair_count"], 2000);
    assert_eq!(v["histogram_cipher"].as_array().unwrap().len(), 256);
}

#[test]
fn mismatched_dimensions_exit_3() {
    let dir = TempDir::new().unwrap();
    let small = dir.path().join("small.pgm");
    std::fs::write(&small, b"P5\n2 2\n255\n\x00\x01\x02\x03").unwrap();
    let plain = image_path("blobs.pgm");
    let out = qwc(&["analyze", "--in", s(&plain), "--cipher", s(&small)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_parameters_exit_3() {
    assert_eq!(qwc(&["walk", "--theta1", "7"]).status.code(), Some(3));
    assert_eq!(qwc(&["walk", "--message", "01x"]).status.code(), Some(3));
    assert_eq!(
        qwc(&["walk", "--coin-init", "1,0,1,0"]).status.code(),
        Some(3)
    );
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(
        qwc(&["scan", "--step", "0.5", "--full"]).status.code(),
        Some(1)
    );
    assert_eq!(qwc(&["walk", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(qwc(&["scan", "--resume"]).status.code(), Some(1));
}

#[test]
fn io_and_format_errors() {
    let out = qwc(&[
        "encrypt",
        "--in",
        "/nonexistent/x.pgm",
        "--out",
        "/tmp/never.pgm",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.pgm");
    std::fs::write(&bad, b"P2\n1 1\n255\n7\n").unwrap();
    let out = qwc(&[
        "encrypt",
        "--in",
        s(&bad),
        "--out",
        s(&dir.path().join("o.pgm")),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn circuit_counts() {
    let out = qwc(&["circuit", "--n", "3", "--steps", "5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["two_qubit"], 16);
    let mut args = vec!["circuit"];
    args.extend(CASE_I);
    let v: serde_json::Value = serde_json::from_str(&stdout(&qwc(&args))).unwrap();
    assert_eq!(v["two_qubit"], 952);
}

#[test]
fn localized_circuit_starts_with_hadamards() {
    let dir = TempDir::new().unwrap();
    let dump = dir.path().join("walk.txt");
    stdout(&qwc(&[
        "circuit",
        "--n",
        "3",
        "--steps",
        "2",
        "--localized",
        "--out",
        s(&dump),
    ]));
    let text = std::fs::read_to_string(&dump).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "qubits 4");
    assert_eq!(&lines[1..4], &["H 1", "H 2", "H 3"]);
    assert!(lines[4].starts_with("U 0"));
}

fn scan_args<'a>(out: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut args = vec![
        "scan",
        "--n",
        "4",
        "--steps",
        "6",
        "--message",
        "01",
        "--step",
        "3.2",
        "--pairs",
        "200",
        "--out",
        out,
    ];
    args.extend_from_slice(extra);
    args
}

#[test]
fn scan_resume_completes_truncated_output() {
    let dir = TempDir::new().unwrap();
    let full = dir.path().join("full.jsonl");
    let part = dir.path().join("part.jsonl");
    stdout(&qwc(&scan_args(s(&full), &[])));
    let complete = std::fs::read(&full).unwrap();
    assert_eq!(complete.iter().filter(|&&b| b == b'\n').count(), 8);
    // keep three records and half of the fourth
    let cut = complete
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == b'\n')
        .nth(2)
        .map(|(i, _)| i + 1 + 20)
        .unwrap();
    std::fs::write(&part, &complete[..cut]).unwrap();
    stdout(&qwc(&scan_args(s(&part), &["--resume"])));
    assert_eq!(std::fs::read(&part).unwrap(), complete);
}

#[test]
fn scan_csv_has_header_and_rows() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("scan.csv");
    stdout(&qwc(&scan_args(s(&csv), &["--format", "csv"])));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert!(lines[0].starts_with("theta1,theta2,theta3,"));
    assert!(lines[0].contains("is_paradox"));
}

#[test]
fn scan_threads_do_not_change_output() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let run = |path: &Path, threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_qwc"))
            .args(scan_args(s(path), &[]))
            .env("QWC_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
    };
    run(&a, "1");
    run(&b, "4");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
