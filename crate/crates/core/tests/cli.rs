// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hls_forge::ir::{gen_toy, parse_sfg, validate_sfg};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hls-forge")).args(args).output().unwrap()
}

fn synth(io: &str, map: &str, extra: &[&str]) -> Output {
    let (sfg, io, map, lib) = (fixture("toy.sfg"), fixture(io), fixture(map), fixture("unit.lib.json"));
    let mut args = vec![
        "synth",
        "--sfg",
        sfg.to_str().unwrap(),
        "--io",
        io.to_str().unwrap(),
        "--map",
        map.to_str().unwrap(),
        "--lib",
        lib.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sequential_toy_succeeds() {
    let o = synth("toy_seq.io", "one_bank.map", &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("Memory bank"));
    assert!(header.ends_with("Registers"));
    let values: Vec<&str> = text.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(values[..7], ["1", "1", "1", "1", "1", "1", "5"]);
}

#[test]
fn json_report_parses() {
    let o = synth("toy_par.io", "two_banks.map", &["--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mult"], 2);
    assert_eq!(v["memory_banks"], 2);
}

#[test]
fn exit_codes_follow_the_failure_class() {
    let conflict = synth("toy_par.io", "one_bank.map", &[]);
    assert_eq!(conflict.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&conflict.stderr).contains("MEMORY_CONFLICT"));

    let timing = synth("toy_seq.io", "one_bank.map", &["--latency", "1"]);
    assert_eq!(timing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&timing.stderr).contains("positive cycle"));

    let missing = run(&["synth", "--sfg", "/nonexistent/graph.sfg"]);
    assert_eq!(missing.status.code(), Some(1));

    let bad = run(&["gen", "fft", "3"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("power of two"));
}

fn artifacts(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn artifacts_are_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let o = synth("toy_seq.io", "one_bank.map", &["--gantt", "--out", dir.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (fa, fb) = (artifacts(a.path()), artifacts(b.path()));
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["gantt.txt", "report.json", "report.txt", "schedule.json"]);
    assert_eq!(fa, fb);
    let golden = fs::read(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/toy_sequential.gantt.txt")).unwrap();
    assert_eq!(fa[0].1, golden);
}

#[test]
fn generators_write_valid_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let toy = dir.path().join("toy.sfg");
    assert_eq!(run(&["gen", "toy", "--out", toy.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(parse_sfg(&fs::read_to_string(&toy).unwrap()).unwrap(), gen_toy());

    let o = run(&["gen", "fft", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let g = parse_sfg(&stdout(&o)).unwrap();
    assert!(validate_sfg(&g).is_empty());
    assert_eq!(g.inputs().len(), 8);
}

#[test]
fn sweep_emits_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("grid.csv");
    let maps = format!("{},{}", fixture("one_bank.map").display(), fixture("two_banks.map").display());
    let (sfg, io, lib) = (fixture("toy.sfg"), fixture("toy_par.io"), fixture("unit.lib.json"));
    let o = run(&[
        "sweep",
        "--sfg",
        sfg.to_str().unwrap(),
        "--io",
        io.to_str().unwrap(),
        "--lib",
        lib.to_str().unwrap(),
        "--map",
        &maps,
        "--latency",
        "3,5",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "latency_bound");
    let status = headers.iter().position(|h| h == "status").unwrap();
    let rows: Vec<(String, String)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[status].to_string())
        })
        .collect();
    let expect = [("3", "memory"), ("3", "ok"), ("5", "ok"), ("5", "ok")];
    assert_eq!(rows.len(), 4);
    for ((l, s), (el, es)) in rows.iter().zip(expect) {
        assert_eq!((l.as_str(), s.as_str()), (el, es));
    }
}
