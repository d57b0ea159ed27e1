//! Exit codes and output formats of the `geodeduce` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
}

fn geodeduce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geodeduce"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn script(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn solve_prints_the_relation() {
    let o = geodeduce(&["solve", corpus("problem06.gcs").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "P = (8*sqrt(2)) * s\n");
}

#[test]
fn solve_json_is_a_run_report() {
    let o = geodeduce(&[
        "solve",
        corpus("problem23.gcs").to_str().unwrap(),
        "--json",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["problem"], "23");
    assert_eq!(v["results"][0]["type"], "relation");
    assert_eq!(v["results"][0]["ratio_text"], "253/34");
    assert_eq!(v["results"][0]["minimal_polynomial"], "34*m - 253");
}

#[test]
fn expect_pragma_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let src = fs::read_to_string(corpus("problem06.gcs")).unwrap();
    let good = script(dir.path(), "good.gcs", &format!("#! expect 8*sqrt(2)\n{src}"));
    assert_eq!(geodeduce(&["solve", &good]).status.code(), Some(0));
    let bad = script(dir.path(), "bad.gcs", &format!("#! expect 7*sqrt(2)\n{src}"));
    let o = geodeduce(&["solve", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("mismatch"), "{}", stderr(&o));
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = script(dir.path(), "bad.gcs", "A = FreePoint()\nB = Rotate(A)\n");
    let o = geodeduce(&["solve", &f]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.gcs:2:5"), "{err}");
    assert!(err.contains("Midpoint"), "{err}");
    assert_eq!(geodeduce(&["solve", "/nonexistent/x.gcs"]).status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_three() {
    let o = geodeduce(&[
        "solve",
        corpus("problem25.gcs").to_str().unwrap(),
        "--budget",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn locus_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("points.csv");
    let o = geodeduce(&[
        "locus",
        corpus("problem25.gcs").to_str().unwrap(),
        "--emit-points",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(
        csv,
        "query,x,y\n0,0,0\n0,0.0954915028125,0\n0,0.25,0\n0,0.654508497187,0\n0,1,0\n"
    );
}

#[test]
fn locus_region_filters_and_intersects() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("points.csv");
    let o = geodeduce(&[
        "locus",
        corpus("problem58.gcs").to_str().unwrap(),
        "--emit-points",
        out.to_str().unwrap(),
        "--region",
        "-0.5,-0.5,1.5,1.5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("(0.474393483331, 0.248284688634)"),
        "{}",
        stdout(&o)
    );
    let csv = fs::read_to_string(&out).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("query,x,y"));
    for row in rows {
        let v: Vec<f64> = row.split(',').skip(1).map(|t| t.parse().unwrap()).collect();
        assert!(
            (-0.5..=1.5).contains(&v[0]) && (-0.5..=1.5).contains(&v[1]),
            "{row}"
        );
    }
}

#[test]
fn bad_region_is_an_input_error() {
    let o = geodeduce(&[
        "locus",
        corpus("problem25.gcs").to_str().unwrap(),
        "--emit-points",
        "/dev/null",
        "--region",
        "1,0,0,1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_passes_on_the_bundled_corpus() {
    let o = geodeduce(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    for id in ["06", "15", "23", "25", "47", "58"] {
        assert!(out.contains(id), "{out}");
    }
}

#[test]
fn selftest_with_missing_corpus_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = geodeduce(&["selftest", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
