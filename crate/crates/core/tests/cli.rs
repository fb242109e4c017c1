use std::path::{Path, PathBuf};

use surgerylab::cli::{run_with, Census};

fn data(name: &str) -> String {
    format!("{}/data/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(census: &Path, args: &[&str]) -> Out {
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let argv = std::iter::once("surgerylab").chain(args.iter().copied());
    let code = run_with(argv, &Census::new(census), &mut o, &mut e);
    Out { code, stdout: String::from_utf8(o).unwrap(), stderr: String::from_utf8(e).unwrap() }
}

fn census(dir: &tempfile::TempDir) -> PathBuf {
    dir.path().join("census.jsonl")
}

#[test]
fn homology_of_lens_space() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&census(&dir), &["homology", "--diagram", &data("unknot_kink"), "--fill", "5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.trim(), "Z/5");
}

#[test]
fn solve_is_cached_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let c = census(&dir);
    let first = run(&c, &["solve", "--diagram", &data("figure_eight")]);
    assert_eq!(first.code, 0, "{}", first.stderr);
    let v: serde_json::Value = serde_json::from_str(&first.stdout).unwrap();
    assert_eq!(v["classification"], "GEOMETRIC");
    assert_eq!(v["schema"], "surgerylab.solve/1");
    let lines = std::fs::read_to_string(&c).unwrap().lines().count();
    let second = run(&c, &["solve", "--diagram", &data("figure_eight")]);
    assert_eq!(second.stdout, first.stdout);
    assert_eq!(std::fs::read_to_string(&c).unwrap().lines().count(), lines);
}

#[test]
fn corrupt_census_lines_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let c = census(&dir);
    std::fs::write(&c, "not json\n").unwrap();
    let r = run(&c, &["solve", "--diagram", &data("figure_eight")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn whitehead_sweep_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--diagram", &data("whitehead"), "--cusp", "0", "--family", "-1/n", "--range", "1..=10"];
    let r = run(&census(&dir), &args);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(rows[0], "n,class,volume,residual");
    assert_eq!(rows.len(), 11);
    assert!(rows[1..].iter().all(|l| l.contains(",GEOMETRIC,")));
    assert_eq!(r.stderr.trim(), "monotone from n = 1");
}

#[test]
fn sweep_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let p = path.to_str().unwrap();
    let args = ["sweep", "--diagram", &data("whitehead"), "--cusp", "0", "--family", "-1/n", "--range", "1..4", "--format", "json", "--out", p];
    let r = run(&census(&dir), &args);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.starts_with("monotone from n = "));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], "surgerylab.sweep/1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn compare_reports() {
    let dir = tempfile::tempdir().unwrap();
    let c = census(&dir);
    let mut files = Vec::new();
    for (name, fill) in [("figure_eight", "*"), ("figure_eight", "*"), ("whitehead", "-1/2,*")] {
        let path = dir.path().join(format!("{name}{}.json", files.len()));
        let r = run(&c, &["solve", "--diagram", &data(name), "--fill", fill, "--out", path.to_str().unwrap()]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        files.push(path.to_str().unwrap().to_string());
    }
    let same = run(&c, &["compare", &files[0], &files[1]]);
    assert_eq!(same.stdout.trim(), "INCONCLUSIVE");
    let diff = run(&c, &["compare", &files[0], &files[2]]);
    assert_eq!(diff.stdout.trim(), "DISTINCT");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c = census(&dir);
    let garbage = dir.path().join("bad.pd");
    std::fs::write(&garbage, "PD[X[1,2").unwrap();
    assert_eq!(run(&c, &["solve", "--diagram", garbage.to_str().unwrap()]).code, 2);
    assert_eq!(run(&c, &["frobnicate"]).code, 2);
    let wh = data("whitehead");
    let sweep = |range: &str, family: &str| run(&c, &["sweep", "--diagram", &wh, "--cusp", "0", "--family", family, "--range", range]).code;
    assert_eq!(sweep("3..2", "-1/n"), 3);
    assert_eq!(sweep("x", "-1/n"), 2);
    assert_eq!(sweep("1..3", "1/0"), 3);
    assert_eq!(run(&c, &["solve", "--diagram", &wh, "--fill", "1,2,3"]).code, 3);
    assert_eq!(run(&c, &["--help"]).code, 0);
}
