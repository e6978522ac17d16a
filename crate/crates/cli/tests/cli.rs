use std::process::{Command, Output};

use stern_core::SparsePoly;

fn stern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stern")).args(args).env_remove("STERN_PRECISION").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = stern(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn error_record(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).lines().find(|l| l.starts_with("error\t")).unwrap_or_default().to_string()
}

#[test]
fn gen_single_and_range() {
    assert_eq!(stdout(&["gen", "11"]), "1 + z + z^3 + z^4 + z^5\n");
    assert_eq!(stdout(&["gen", "1"]), "1\n");
    let table = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/stern_1_to_32.txt")).unwrap();
    let want: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).collect();
    let got = stdout(&["gen", "--range", "1..32"]);
    assert_eq!(got.lines().collect::<Vec<_>>(), want);
}

#[test]
fn seq_matches_subsequence_fixture() {
    let table = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/subseq_0100100_n3.txt")).unwrap();
    let want: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).collect();
    let got = stdout(&["seq", "--bits", "0100100", "--n", "3", "--m", "0..6"]);
    assert_eq!(got.lines().collect::<Vec<_>>(), want);
}

#[test]
fn json_round_trips_and_is_stable() {
    let a = stdout(&["gen", "--range", "1..40", "--format", "json"]);
    assert_eq!(a, stdout(&["gen", "--range", "1..40", "--format", "json", "--sequential"]));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 40);
    for (k, row) in rows.iter().enumerate() {
        let keys: Vec<&String> = row.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["index", "poly"]);
        let p: SparsePoly = serde_json::from_value(row["poly"].clone()).unwrap();
        assert_eq!(p, stern_core::stern_poly(k as u64 + 1));
    }
    let z1 = stdout(&["zeros", "23", "--format", "json"]);
    assert_eq!(z1, stdout(&["zeros", "23", "--format", "json", "--sequential"]));
    let v: serde_json::Value = serde_json::from_str(&z1).unwrap();
    assert_eq!(v["roots"].as_array().unwrap().len(), 11);
    assert_eq!(v["source_degree"], 11);
}

#[test]
fn zeros_csv_and_file_output() {
    let csv = stdout(&["zeros", "11"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("re,im,multiplicity,residual"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.len() == 4 && r[2] == 1.0 && r[3] < 1e-20));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.csv");
    stdout(&["zeros", "11", "--out", path.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(path).unwrap(), csv);
}

#[test]
fn series_and_identities() {
    assert_eq!(stdout(&["series", "--bits", "0100100", "--order", "32"]), "1 + q^2 + q^4 + q^8 + q^18 + q^20 + q^24 + O(q^32)\n");
    let s = stdout(&["identities", "phi-quadratic", "--n", "1"]);
    assert!(s.starts_with("phi-quadratic\tn=1\tpass\n"), "{s}");
    let j = stdout(&["identities", "prop6", "--n", "9", "--m", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&j).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["params"]["m"], 2);
}

#[test]
fn bounds_report() {
    let j = stdout(&["bounds", "--n", "23,93", "--rho", "0.5", "--sector", "0:1.5"]);
    let v: serde_json::Value = serde_json::from_str(&j).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["pass"]["sector"] == true && r["pass"]["annulus"] == true));
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&["plot", "--bits", "per=10", "--n", "11", "--m", "0..2", "--out", dir.path().to_str().unwrap()]);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.iter().map(|r| r[2]).collect::<Vec<_>>(), ["11", "22", "46"]);
    let first = std::fs::read_to_string(rows[0][3]).unwrap();
    assert!(first.starts_with("<?xml"));
    assert!(first.contains("version=\"1.1\""));
    assert_eq!(first.matches("r=\"1.5\"").count(), 11);
    // same input, same bytes
    let again = tempfile::tempdir().unwrap();
    stdout(&["plot", "--bits", "per=10", "--n", "11", "--m", "0..0", "--out", again.path().to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(again.path().join("zeros_m0.svg")).unwrap(), first);
}

#[test]
fn failures_have_codes_and_records() {
    let out = stern(&["zeros", "8"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(error_record(&out).starts_with("error\tkind=domain\tcode=4\tmessage="));

    let out = stern(&["seq", "--bits", "01x", "--n", "3", "--m", "0..2"]);
    assert_eq!(out.status.code(), Some(8));
    assert!(error_record(&out).contains("kind=parse"));

    let out = stern(&["gen", "--range", "5..3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(error_record(&out).contains("kind=usage"));

    let out = stern(&["seq", "--bits", "1", "--n", "1", "--m", "0..70"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(error_record(&out).contains("kind=overflow"));

    let out = stern(&["zeros", "11", "--precision", "8"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let out = stern(&["gen", "11", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_stern")).args(["zeros", "7", "--format", "json"]).env("STERN_PRECISION", "256").output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision_bits"], 256);
}
