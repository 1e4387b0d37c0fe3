//! End-to-end tests of the command-line interface: exit codes, file
//! round-trips, and byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lcanon"))
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lcanon-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

const AMPLITUDE_DAMPING: &str = r#"{
  "type": "gksl",
  "h": {"rows": 2, "cols": 2, "data": [[0,0],[0,0],[0,0],[0,0]]},
  "kraus": [{"rows": 2, "cols": 2, "data": [[0,0],[1,0],[0,0],[0,0]]}]
}"#;

const HALF_IDENTITY: &str =
    r#"{"rows": 2, "cols": 2, "data": [[0.5,0],[0,0],[0,0],[0.5,0]]}"#;

/// Superoperator matrix of the transposition map on C² (the SWAP matrix in
/// the vec representation).
const TRANSPOSITION: &str = r#"{
  "type": "superop_matrix",
  "matrix": {"rows": 4, "cols": 4, "data": [
    [1,0],[0,0],[0,0],[0,0],
    [0,0],[0,0],[1,0],[0,0],
    [0,0],[1,0],[0,0],[0,0],
    [0,0],[0,0],[0,0],[1,0]
  ]}
}"#;

const IDENTITY_CHANNEL: &str = r#"{
  "type": "superop_matrix",
  "matrix": {"rows": 4, "cols": 4, "data": [
    [1,0],[0,0],[0,0],[0,0],
    [0,0],[1,0],[0,0],[0,0],
    [0,0],[0,0],[1,0],[0,0],
    [0,0],[0,0],[0,0],[1,0]
  ]}
}"#;

#[test]
fn canonicalize_verify_round_trip_exits_zero() {
    let dir = tempdir("roundtrip");
    let gen = write(&dir, "ad.json", AMPLITUDE_DAMPING);
    let b = write(&dir, "b.json", HALF_IDENTITY);
    let out = dir.join("cd.json");

    let res = run(&[
        "canonicalize",
        gen.to_str().unwrap(),
        b.to_str().unwrap(),
        "--mode",
        "cptp",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));

    let text = std::fs::read_to_string(&out).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    // H = 0 and a single Kraus operator, per the hand-derived fixed point.
    assert_eq!(parsed["kraus"].as_array().unwrap().len(), 1);
    for entry in parsed["h"]["data"].as_array().unwrap() {
        assert_eq!(entry[0].as_f64().unwrap(), 0.0);
        assert_eq!(entry[1].as_f64().unwrap(), 0.0);
    }

    let res = run(&[
        "verify",
        out.to_str().unwrap(),
        gen.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
}

#[test]
fn k_plus_kraus_presentation_round_trips_in_cp_mode() {
    // The identity map presented as K₀ = 0, Kraus = {1}; canonicalization
    // starts from the given parts and lands on K = ½·1, Φ = 0.
    let dir = tempdir("kpluskraus");
    let gen = write(
        &dir,
        "id.json",
        r#"{"type": "k_plus_kraus",
            "k": {"rows": 2, "cols": 2, "data": [[0,0],[0,0],[0,0],[0,0]]},
            "kraus": [{"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[1,0]]}]}"#,
    );
    let b = write(&dir, "b.json", HALF_IDENTITY);
    let out = dir.join("cd.json");
    let res = run(&[
        "canonicalize",
        gen.to_str().unwrap(),
        b.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["mode"], "cp");
    assert_eq!(parsed["kraus"].as_array().unwrap().len(), 0);
    let k = parsed["k"]["data"].as_array().unwrap();
    assert_eq!(k[0][0].as_f64().unwrap(), 0.5);
    assert_eq!(k[3][0].as_f64().unwrap(), 0.5);

    let res = run(&["verify", out.to_str().unwrap(), gen.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
}

#[test]
fn imaginary_trace_reference_exits_one_and_cites_hypothesis() {
    let dir = tempdir("imtrace");
    let gen = write(&dir, "ad.json", AMPLITUDE_DAMPING);
    // B = i·1 has Re tr B = 0.
    let b = write(
        &dir,
        "ib.json",
        r#"{"rows": 2, "cols": 2, "data": [[0,1],[0,0],[0,0],[0,1]]}"#,
    );
    let res = run(&[
        "canonicalize",
        gen.to_str().unwrap(),
        b.to_str().unwrap(),
        "--mode",
        "cptp",
    ]);
    assert_eq!(res.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("Re(tr(B))"), "stderr: {stderr}");
}

#[test]
fn transposition_generator_exits_two() {
    let dir = tempdir("transpose");
    let gen = write(&dir, "t.json", TRANSPOSITION);
    let b = write(&dir, "b.json", HALF_IDENTITY);
    let res = run(&["canonicalize", gen.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("not a CP-semigroup generator"), "stderr: {stderr}");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempdir("determinism");
    let gen = write(&dir, "ad.json", AMPLITUDE_DAMPING);
    let b = write(&dir, "b.json", HALF_IDENTITY);
    let out1 = dir.join("cd1.json");
    let out2 = dir.join("cd2.json");
    for out in [&out1, &out2] {
        let res = run(&[
            "canonicalize",
            gen.to_str().unwrap(),
            b.to_str().unwrap(),
            "--mode",
            "cptp",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success());
    }
    let b1 = std::fs::read(&out1).unwrap();
    let b2 = std::fs::read(&out2).unwrap();
    assert_eq!(b1, b2, "reruns must produce byte-identical output");
}

#[test]
fn witness_table_matches_closed_form() {
    let res = run(&["witness", "--weights", "geometric:0.5", "--dims", "2:10"]);
    assert!(res.status.success());
    let parsed: serde_json::Value =
        serde_json::from_slice(&res.stdout).expect("valid JSON on stdout");
    let table = parsed["table"].as_array().unwrap();
    assert_eq!(table.len(), 9);
    let last = &table[table.len() - 1];
    assert_eq!(last["dim"].as_i64().unwrap(), 10);
    assert_eq!(last["sup_norm"].as_f64().unwrap(), 10485.76);
    assert_eq!(parsed["absolutely_summable"].as_bool(), Some(true));
}

#[test]
fn witness_rejects_bad_rules() {
    let res = run(&["witness", "--weights", "zeta:0.5", "--dims", "2:4"]);
    assert_eq!(res.status.code(), Some(1));
    let res = run(&["witness", "--weights", "geometric:0.5", "--dims", "4:2"]);
    assert_eq!(res.status.code(), Some(1));
    // A zero weight is a validation error.
    let res = run(&["witness", "--weights", "geometric:0", "--dims", "1:3"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn choi_of_identity_channel_has_expected_spectrum() {
    let dir = tempdir("choi");
    let map = write(&dir, "id.json", IDENTITY_CHANNEL);
    let res = run(&["choi", map.to_str().unwrap(), "--weights", "1,1"]);
    assert!(res.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert!(parsed["min_eigenvalue"].as_f64().unwrap().abs() < 1e-12);
    assert!((parsed["max_eigenvalue"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn kraus_of_identity_channel_is_single_operator() {
    let dir = tempdir("kraus");
    let map = write(&dir, "id.json", IDENTITY_CHANNEL);
    let res = run(&["kraus", map.to_str().unwrap()]);
    assert!(res.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(parsed["count"].as_i64().unwrap(), 1);

    // Transposition is not CP: exit 2.
    let t = write(&dir, "t.json", TRANSPOSITION);
    let res = run(&["kraus", t.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn malformed_files_exit_one_naming_the_field() {
    let dir = tempdir("badfiles");
    let bad = write(
        &dir,
        "bad.json",
        r#"{"type": "gksl", "h": {"rows": 2, "cols": 2, "data": [[0,0]]}}"#,
    );
    let b = write(&dir, "b.json", HALF_IDENTITY);
    let res = run(&["canonicalize", bad.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("data") || stderr.contains("generator.h"), "stderr: {stderr}");

    let missing = dir.join("does-not-exist.json");
    let res = run(&["canonicalize", missing.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn tolerance_flags_override_environment() {
    let dir = tempdir("tols");
    let gen = write(&dir, "ad.json", AMPLITUDE_DAMPING);
    let b = write(&dir, "b.json", HALF_IDENTITY);
    // An absurd env tolerance breaks validation unless the flag overrides it.
    let res = bin()
        .env("LCANON_TOL_RECON", "-1")
        .args(["canonicalize", gen.to_str().unwrap(), b.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(1));
    let res = bin()
        .env("LCANON_TOL_RECON", "-1")
        .args([
            "canonicalize",
            gen.to_str().unwrap(),
            b.to_str().unwrap(),
            "--tol-recon",
            "1e-9",
        ])
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(0));
    // Unparseable env value names the variable.
    let res = bin()
        .env("LCANON_TOL_EQ", "soup")
        .args(["witness", "--weights", "geometric:0.5", "--dims", "2:3"])
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("LCANON_TOL_EQ"));
}

#[test]
fn verify_rejects_tampered_decomposition() {
    let dir = tempdir("tamper");
    let gen = write(&dir, "ad.json", AMPLITUDE_DAMPING);
    let b = write(&dir, "b.json", HALF_IDENTITY);
    let out = dir.join("cd.json");
    let res = run(&[
        "canonicalize",
        gen.to_str().unwrap(),
        b.to_str().unwrap(),
        "--mode",
        "cptp",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    // Perturb K in the decomposition file.
    let text = std::fs::read_to_string(&out).unwrap();
    let mut parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    parsed["k"]["data"][0][1] = serde_json::json!(0.1);
    let tampered = write(&dir, "tampered.json", &parsed.to_string());
    let res = run(&["verify", tampered.to_str().unwrap(), gen.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}
