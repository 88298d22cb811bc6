use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn pstlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pstlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn build(dir: &Path, name: &str, family: &str, params: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut args = vec!["build", "--family", family, "--out", path.to_str().unwrap()];
    for p in params {
        args.extend(["--param", p]);
    }
    let o = pstlab(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn build_parse_serialize_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let first = build(dir.path(), "p4.json", "weighted-p4", &["a=8/sqrt(15)", "b=6/sqrt(15)"]);
    let again = dir.path().join("again.json");
    // scaling by one parses and re-serializes the file
    let o = pstlab(&["scale", "--graph", first.to_str().unwrap(), "--factor", "1", "--out", again.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read(&first).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn hypercube_transfer_is_verified() {
    let dir = TempDir::new().unwrap();
    let q4 = build(dir.path(), "q4.json", "hypercube", &["d=4"]);
    let q = q4.to_str().unwrap();
    let o = pstlab(&["pst-verify", "--graph", q, "--from", "0", "--to", "15", "--time", "pi/2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "true");
    let o = pstlab(&["pst-verify", "--graph", q, "--from", "0", "--to", "15", "--time", "pi/3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn apexes_of_layered_graph_cannot_be_swapped() {
    let dir = TempDir::new().unwrap();
    let g = build(dir.path(), "godsil.json", "godsil", &["m=2"]);
    let o = pstlab(&["aut", "--graph", g.to_str().unwrap(), "--swap", "0", "31"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("false"));
}

#[test]
fn scan_writes_csv_and_peaks() {
    let dir = TempDir::new().unwrap();
    let g = build(dir.path(), "q3.json", "hypercube", &["d=3"]);
    let csv = dir.path().join("scan.csv");
    let peaks = dir.path().join("peaks.json");
    let o = pstlab(&[
        "scan", "--graph", g.to_str().unwrap(), "--from", "0", "--to", "7", "--t-max", "3", "--steps", "301",
        "--csv", csv.to_str().unwrap(), "--peaks", peaks.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,fidelity\n"));
    assert_eq!(text.lines().count(), 302);
    assert!(fs::read_to_string(&peaks).unwrap().contains("1.57079632679"));
}

#[test]
fn verify_suite_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = pstlab(&["verify", "--suite", "thm32", "--json", p.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stdout(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn cubelike_certifies_transfer() {
    let o = pstlab(&["cubelike", "--generators", "100,010,001,011"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let g = build(dir.path(), "k2.json", "complete", &["n=2"]);
    let gs = g.to_str().unwrap();

    // refusing to overwrite
    let o = pstlab(&["build", "--family", "complete", "--param", "n=2", "--out", gs]);
    assert_eq!(o.status.code(), Some(2));
    let o = pstlab(&["build", "--family", "complete", "--param", "n=3", "--out", gs, "--force"]);
    assert!(o.status.success());

    // malformed input
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"n": 2, "edges": [[1, 0, 1.0]]}"#).unwrap();
    let o = pstlab(&["triangles", "--graph", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = pstlab(&["build", "--family", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pstlab(&["build", "--family", "path", "--param", "n=3", "--param", "colour=red"]);
    assert_eq!(o.status.code(), Some(2));

    // size guard on the product space
    let q4 = build(dir.path(), "q4.json", "hypercube", &["d=4"]);
    let o = pstlab(&["orbit-quotient", "--graph", q4.to_str().unwrap(), "--k", "4"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
