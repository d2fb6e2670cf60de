use std::path::PathBuf;

use tractable_ising_cli::{parse_model_file, run_cli, write_model_file};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(std::iter::once("tractable-ising").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn column(table: &str, name: &str) -> Vec<String> {
    let mut lines = table.lines();
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let at = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split('\t').nth(at).unwrap().to_string()).collect()
}

#[test]
fn infer_single_edge() {
    let (code, out, _) = run(&["infer", "--model", &fixture("single_edge.json")]);
    assert_eq!(code, 0);
    assert_eq!(column(&out, "log_z"), vec!["1.50640886808"]);
    assert_eq!(column(&out, "dense_fallbacks"), vec!["0"]);
}

#[test]
fn infer_bowtie_json() {
    let (code, out, _) = run(&["infer", "--model", &fixture("bowtie.json"), "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let triangle = 2.0 * 3f64.exp() + 6.0 * (-1f64).exp();
    let expected = 2.0 * triangle.ln() - 2f64.ln();
    assert!((doc["log_z"].as_f64().unwrap() - expected).abs() < 1e-10);
    assert_eq!(doc["flags"].as_array().unwrap().len(), 0);
}

#[test]
fn sampling_is_byte_identical_per_seed() {
    let model = fixture("bowtie.json");
    let args = ["sample", "--model", model.as_str(), "--num-samples", "3", "--seed", "7"];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(first.lines().count(), 3);
    assert!(first.lines().all(|l| l.split(' ').all(|s| s == "1" || s == "-1") && l.split(' ').count() == 5));
    assert_eq!(run(&args).1, first);
    let (_, json, _) = run(&["sample", "--model", &model, "--num-samples", "2", "--seed", "7", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["samples"].as_array().unwrap().len(), 2);
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, size) in [("planar", "12"), ("k33free", "17"), ("necklace", "15")] {
        let path = dir.path().join(format!("{kind}.json"));
        let path = path.to_str().unwrap();
        let (code, _, err) =
            run(&["gen", "--kind", kind, "--size", size, "--seed", "3", "--coupling-std", "0.5", "--output", path]);
        assert_eq!(code, 0, "{err}");
        let text = std::fs::read_to_string(path).unwrap();
        let m = parse_model_file(&text).unwrap();
        assert_eq!(m.num_vertices().to_string(), size);
        assert_eq!(write_model_file(&m), text);
        let (code, _, err) = run(&["infer", "--model", path]);
        assert_eq!(code, 0, "{err}");
    }
    let (code, _, _) = run(&["gen", "--kind", "necklace", "--size", "12"]);
    assert_eq!(code, 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["infer", "--model", &fixture("missing.json")]).0, 3);
    let (code, _, err) = run(&["infer", "--model", &fixture("duplicate_edge.json")]);
    assert_eq!(code, 3);
    assert!(err.contains("duplicate edge"));
    let (code, _, err) = run(&["infer", "--model", &fixture("k33.json")]);
    assert_eq!(code, 4, "{err}");
    assert_eq!(run(&["infer", "--modle", "x"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    let (code, help, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(help.contains("4  unsupported topology"));
}

#[test]
fn tables_have_headers() {
    let (code, out, _) = run(&["bench", "--sizes", "64,128", "--seed", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("n\tinfer_ms\tsample_ms"));
    assert_eq!(column(&out, "n"), vec!["64", "128"]);
    let (code, out, _) = run(&["kltest", "--size", "6", "--sample-counts", "100,1000", "--seed", "2"]);
    assert_eq!(code, 0);
    assert_eq!(column(&out, "m"), vec!["100", "1000"]);
    assert_eq!(run(&["kltest", "--size", "24"]).0, 2);
}

#[test]
fn selftest_passes() {
    let (code, out, _) = run(&["selftest"]);
    assert_eq!(code, 0, "{out}");
    assert!(column(&out, "status").iter().all(|s| s == "PASS"));
}
