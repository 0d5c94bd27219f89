//! End-to-end runs of the `lasvcsp` binary.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lasvcsp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lasvcsp")).current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = lasvcsp(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

const EDGE: &str = "domain 0 1\nvar a\nvar b\nfun cut 2\n0 0 0\n0 1 1\n1 0 1\n1 1 0\ncon cut 1 a b\n";

#[test]
fn generators_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    for args in [
        &["gen", "--random-3lin", "5", "4", "--seed", "3"][..],
        &["gen", "--random-3sat", "4", "6", "--seed", "3"],
        &["gen", "--random-maxcut", "5", "--max-weight", "4", "--seed", "3"],
        &["gen", "--random-lp", "3", "2", "--seed", "3"],
    ] {
        assert_eq!(ok(d, args), ok(d, args), "{args:?}");
    }
    ok(d, &["gen", "--maxcut-cycle", "4", "-o", "c4.vcsp"]);
    assert_eq!(ok(d, &["solve-blp", "c4.vcsp"]), "blp  4 (4)\nopt  4\n");
}

#[test]
fn reduction_chain_writes_every_stage() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    std::fs::write(d.join("x.3lin"), "vars 3\n1 2 3 = 1\n").unwrap();
    let report = ok(d, &["reduce", "--chain", "3lin", "x.3lin"]);
    assert!(report.contains("3lin    satisfiable=true"), "{report}");
    assert!(report.contains("3sat    satisfiable=true"), "{report}");
    assert!(report.contains("reaches=true"), "{report}");
    assert!(d.join("x.cnf").exists() && d.join("x.graph").exists());

    let again = ok(d, &["reduce", "--chain", "3sat", "x.cnf", "-o", "y"]);
    assert!(again.contains("reaches=true"), "{again}");
    assert_eq!(std::fs::read(d.join("x.graph")).unwrap(), std::fs::read(d.join("y.graph")).unwrap());
}

#[test]
fn solve_and_certify_round_trip() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--random-lp", "3", "2", "--seed", "1", "-o", "p.lp"]);
    let blp = ok(d, &["solve-blp", "p.lp"]);
    assert!(blp.starts_with("blp  ") && blp.contains("\nopt  "), "{blp}");

    ok(d, &["lift", "p.lp", "--level", "1", "-o", "p.sdp"]);
    let sdp = std::fs::read_to_string(d.join("p.sdp")).unwrap();
    assert!(sdp.starts_with("vars 7\n"), "{sdp}");
    assert!(sdp.contains("{x1,x2,x3}"));

    let solved = ok(d, &["solve-sdp", "p.lp", "--level", "1", "-o", "p.sol"]);
    assert!(solved.starts_with("level 1  coordinates 7"), "{solved}");
    let from_pencil = ok(d, &["solve-sdp", "p.sdp"]);
    let value = |s: &str| s.split("value").nth(1).map(str::to_string);
    assert_eq!(value(&solved), value(&from_pencil));

    let cert = ok(d, &["certify", "p.lp", "p.sol"]);
    assert!(cert.ends_with("certified\n"), "{cert}");

    let sol = std::fs::read_to_string(d.join("p.sol")).unwrap();
    let tampered: String = sol
        .lines()
        .map(|l| if l.starts_with("value ") { "value 1000\n".to_string() } else { format!("{l}\n") })
        .collect();
    std::fs::write(d.join("bad.sol"), tampered).unwrap();
    let out = lasvcsp(d, &["certify", "p.lp", "bad.sol"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAILED"));
}

#[test]
fn min_level_table_and_csv() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--maxcut-cycle", "3", "-o", "triangle.vcsp"]);
    std::fs::write(d.join("edge.vcsp"), EDGE).unwrap();
    let table = ok(d, &["min-level", "triangle.vcsp", "edge.vcsp", "--t-max", "2", "--csv", "t.csv"]);
    assert_eq!(
        table,
        "instance  Opt  BLP  L1         capture\ntriangle  2    3    too-large  unknown\nedge      1    1    -          0\n"
    );
    let csv = std::fs::read_to_string(d.join("t.csv")).unwrap();
    assert!(csv.contains("\nedge,1,1,0,solved,1,1,0,8,0\n"), "{csv}");
    assert!(csv.contains("\ntriangle,2,3,1,too-large,"), "{csv}");
    assert_eq!(table, ok(d, &["min-level", "triangle.vcsp", "edge.vcsp", "--t-max", "2"]));
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.vcsp"), "domain 0 1\nvar a\ncon missing 1 a\n").unwrap();
    let out = lasvcsp(d, &["solve-blp", "bad.vcsp"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error: parse error at line 3: bad.vcsp"), "{err}");

    assert_eq!(code(&lasvcsp(d, &["solve-blp", "x.txt"])), 2);
    assert_eq!(code(&lasvcsp(d, &["solve-blp", "absent.vcsp"])), 1);

    std::fs::write(d.join("edge.vcsp"), EDGE).unwrap();
    let out = lasvcsp(
        d,
        &["solve-sdp", "edge.vcsp", "--level", "0..1", "--max-coordinates", "50000", "--max-iterations", "5"],
    );
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stdout).contains("budget exhausted"));
    assert_eq!(code(&lasvcsp(d, &["lift", "edge.vcsp", "--level", "1", "--max-coordinates", "10"])), 1);
}
