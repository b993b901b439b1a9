use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn qftatlas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qftatlas")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_grid_succeeds_and_verifies() {
    let dir = tempdir().unwrap();
    let file = dir.path().join("c.json");
    let out = qftatlas(&["gen", "--arch", "grid", "--m", "6", "--mode", "relaxed", "--out", path_str(&file)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let verified = qftatlas(&["verify", path_str(&file)]);
    assert_eq!(code(&verified), 0);
    assert!(String::from_utf8_lossy(&verified.stdout).contains("\"ok\": true"));
}

#[test]
fn odd_sycamore_is_a_usage_error() {
    let out = qftatlas(&["gen", "--arch", "sycamore", "--m", "5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));
    assert_eq!(code(&qftatlas(&["gen", "--arch", "grid", "--n", "4"])), 2);
    assert_eq!(code(&qftatlas(&["gen", "--arch", "warp", "--n", "4"])), 2);
}

#[test]
fn single_qubit_lnn_is_one_layer() {
    let out = qftatlas(&["gen", "--arch", "lnn", "--n", "1"]);
    assert_eq!(code(&out), 0);
    let c = qftatlas::circuit::import_json(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(c.depth(), 1);
}

#[test]
fn tampered_file_fails_with_mapping_findings() {
    let dir = tempdir().unwrap();
    let file = dir.path().join("c.json");
    assert_eq!(code(&qftatlas(&["gen", "--arch", "grid", "--m", "3", "--out", path_str(&file)])), 0);
    let text = std::fs::read_to_string(&file).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let swap = doc["layers"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .flat_map(|l| l.as_array_mut().unwrap().iter_mut())
        .find(|op| op["g"] == "swap")
        .unwrap();
    let (a, b) = (swap["p"][0].as_u64().unwrap(), swap["p"][1].as_u64().unwrap());
    // a neighbour of `a` on the 3x3 grid that is not `b`
    let other = [a + 1, a.wrapping_sub(1), a + 3, a.wrapping_sub(3)]
        .into_iter()
        .find(|&q| q < 9 && q != b && (q / 3 == a / 3 || q % 3 == a % 3))
        .unwrap();
    swap["p"][1] = other.into();
    std::fs::write(&file, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = qftatlas(&["verify", path_str(&file)]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["mapping_violations"]["total"].as_u64().unwrap() > 0);
}

#[test]
fn relaxed_file_under_strict_mode_reports_dependencies() {
    let dir = tempdir().unwrap();
    let file = dir.path().join("c.json");
    assert_eq!(code(&qftatlas(&["gen", "--arch", "grid", "--m", "4", "--mode", "relaxed", "--out", path_str(&file)])), 0);
    let out = qftatlas(&["verify", path_str(&file), "--mode", "strict"]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["dependency_violations"]["total"].as_u64().unwrap() > 0);
}

#[test]
fn unreadable_and_malformed_files_exit_two() {
    let dir = tempdir().unwrap();
    assert_eq!(code(&qftatlas(&["verify", path_str(&dir.path().join("missing.json"))])), 2);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"version\": 7}").unwrap();
    assert_eq!(code(&qftatlas(&["verify", path_str(&bad)])), 2);
}

#[test]
fn gen_is_byte_deterministic_and_exports_qasm() {
    let dir = tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for f in [&a, &b] {
        assert_eq!(code(&qftatlas(&["gen", "--arch", "heavyhex", "--n", "20", "--faulty", "17", "--out", path_str(f)])), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let qasm = qftatlas(&["export", path_str(&a), "--format", "qasm"]);
    assert_eq!(code(&qasm), 0);
    let text = String::from_utf8_lossy(&qasm.stdout);
    assert!(text.starts_with("OPENQASM 2.0;"));
    assert!(text.contains("qreg q[20];"));
    let direct = qftatlas(&["gen", "--arch", "heavyhex", "--n", "20", "--faulty", "17", "--format", "qasm"]);
    assert_eq!(direct.stdout, qasm.stdout);
}

#[test]
fn path_fault_is_rejected() {
    assert_eq!(code(&qftatlas(&["gen", "--arch", "heavyhex", "--n", "20", "--faulty", "3"])), 2);
}

#[test]
fn bench_prints_references() {
    let out = qftatlas(&["bench", "--arch", "grid", "--m", "3,4,5,6"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let depths: Vec<&str> = text.lines().filter(|l| l.starts_with("grid,")).map(|l| l.split(',').nth(9).unwrap()).collect();
    assert_eq!(depths, ["32", "66", "113", "172"]);
    assert!(text.contains("| grid | 6 |"));
    let hh = qftatlas(&["bench", "--arch", "heavyhex", "--n", "10,20,30"]);
    let text = String::from_utf8_lossy(&hh.stdout);
    let swaps: Vec<&str> = text.lines().filter(|l| l.starts_with("heavyhex,")).map(|l| l.split(',').nth(10).unwrap()).collect();
    assert_eq!(swaps, ["52", "189", "444"]);
}

#[test]
fn bench_writes_files() {
    let dir = tempdir().unwrap();
    let (csv, md) = (dir.path().join("b.csv"), dir.path().join("b.md"));
    let out = qftatlas(&["bench", "--arch", "sycamore", "--m", "2,4", "--mode", "strict", "--csv", path_str(&csv), "--markdown", path_str(&md)]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# qftatlas bench sycamore strict\narch,size,mode"));
    assert_eq!(text.lines().count(), 4);
    assert!(std::fs::read_to_string(&md).unwrap().contains("| sycamore | 2 | strict |"));
}

#[test]
fn synth_outputs_json_assignments() {
    let out = qftatlas(&["synth", "--shape", "grid-ie-relaxed", "--size", "4", "--limit", "2", "--validate", "4,6"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.as_array().unwrap().len(), 2);
    assert_eq!(doc[0]["assignment"]["shape"], "grid-ie-relaxed");
    assert_eq!(doc[0]["assignment"]["sizes_tested"], serde_json::json!([4, 6]));
    assert!(doc[0]["generalization"]["generalizing"].is_boolean());
    assert_eq!(code(&qftatlas(&["synth", "--shape", "hexagon", "--size", "4"])), 2);
    assert_eq!(code(&qftatlas(&["synth", "--shape", "lnn", "--size", "6", "--cap", "10"])), 2);
}
