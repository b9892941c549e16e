//! End-to-end runs of the `tropmat` binary.

mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tropmat::io::{subdivision_to_json, weights_to_json};
use tropmat::mixsd::tom_to_mixsd;
use tropmat::realize::realizable_tom;
use tropmat::WeightMatrix;

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("tropmat-cli-{}-{name}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Self(dir)
    }

    fn write(&self, file: &str, v: &Value) -> PathBuf {
        let p = self.0.join(file);
        fs::write(&p, v.to_string()).unwrap();
        p
    }

    fn path(&self, file: &str) -> PathBuf {
        self.0.join(file)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropmat"))
        .args(args)
        .output()
        .unwrap()
}

fn run_path(cmd: &str, input: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "-i", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn gen_two_points_on_a_line() {
    let dir = Scratch::new("gen");
    let input = dir.write("w.json", &json!({"a": [[0, 0], [0, 1]]}));
    let o = run_path("gen", &input, &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["format"], "tropmat/1");
    assert_eq!(
        strings(&v["types"]),
        ["(1,1)", "(12,1)", "(2,1)", "(2,12)", "(2,2)"]
    );
}

#[test]
fn gen_output_passes_check_tom() {
    let dir = Scratch::new("gen-check");
    for (k, (label, w)) in common::weight_corpus().into_iter().step_by(3).enumerate() {
        let input = dir.write(&format!("w{k}.json"), &weights_to_json(&w));
        let tom = dir.path(&format!("t{k}.json"));
        let o = run_path("gen", &input, &["-o", tom.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{label}");
        assert!(o.stdout.is_empty());
        let o = run_path("check-tom", &tom, &[]);
        assert_eq!(o.status.code(), Some(0), "{label}");
        let v = stdout_json(&o);
        assert_eq!(v["elimination"], "pass");
        assert_eq!(v["evidence"], json!([]));
    }
}

#[test]
fn check_tom_reports_elimination_failure() {
    let dir = Scratch::new("check-tom");
    let input = dir.write(
        "t.json",
        &json!({"n": 2, "d": 2, "types": ["(1,1)", "(2,2)"]}),
    );
    let o = run_path("check-tom", &input, &[]);
    assert_eq!(o.status.code(), Some(3));
    let v = stdout_json(&o);
    assert_eq!(v["elimination"], "fail");
    assert!(v["evidence"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["axiom"] == "elimination"));
}

#[test]
fn check_mixsd_with_volume() {
    let dir = Scratch::new("check-mixsd");
    let good = dir.write(
        "good.json",
        &json!({"n": 2, "d": 2, "maximal_cells": ["(12,1)", "(2,12)"]}),
    );
    let o = run_path("check-mixsd", &good, &["--volume-check"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["volume"], "pass");

    let bad = dir.write(
        "bad.json",
        &json!({"n": 2, "d": 2, "maximal_cells": ["(12,1)"]}),
    );
    let o = run_path("check-mixsd", &bad, &["--volume-check"]);
    assert_eq!(o.status.code(), Some(3));
    let v = stdout_json(&o);
    assert_eq!(v["boundary"], "fail");
    assert_eq!(v["volume"], "fail");
    assert!(!v["evidence"].as_array().unwrap().is_empty());
}

#[test]
fn reconstruct_delete_contract() {
    let dir = Scratch::new("reconstruct");
    let topes = dir.write("topes.json", &json!(["(1,1)", "(2,1)", "(2,2)"]));
    let out = dir.path("s.json");
    let o = run_path(
        "reconstruct",
        &topes,
        &["-n", "2", "-d", "2", "-o", out.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    let s: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(strings(&s["maximal_cells"]), ["(12,1)", "(2,12)"]);
    assert_eq!(
        strings(&s["cells"]),
        ["(1,1)", "(12,1)", "(2,1)", "(2,12)", "(2,2)"]
    );

    let o = run_path("delete", &out, &["--coord", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(strings(&stdout_json(&o)["maximal_cells"]), ["(12)"]);

    let o = run_path("contract", &out, &["--letter", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["d"], 1);

    let tom = dir.write(
        "tom.json",
        &json!({"n": 2, "d": 2, "types": ["(1,1)", "(12,1)", "(2,1)", "(2,12)", "(2,2)"]}),
    );
    let o = run_path("delete", &tom, &["--coord", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(strings(&stdout_json(&o)["types"]), ["(1)", "(12)", "(2)"]);

    let o = run_path("delete", &out, &["--coord", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dualize_one_slice() {
    let dir = Scratch::new("dualize");
    let w = WeightMatrix::from_integers(&[vec![0, 0, 0], vec![0, 1, 2]]).unwrap();
    let sub = tom_to_mixsd(&realizable_tom(&w).unwrap()).unwrap();
    let s = dir.write("s.json", &subdivision_to_json(&sub, false));
    let o = run_path("dualize", &s, &["--slice", "1"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let v = stdout_json(&o);
    assert_eq!(v["slices"].as_array().unwrap().len(), 1);
    assert_eq!(v["slice_structure"].as_array().unwrap().len(), 1);
    assert_eq!(v["slice_structure"][0]["acyclic"], true);
    assert_eq!(v["arrangement_axioms"]["evidence"], json!([]));
    let cells = v["dual"].as_array().unwrap();
    for c in cells {
        assert!(c["dim"].as_u64().unwrap() <= 2);
    }
    for pair in v["incidence"].as_array().unwrap() {
        let (x, y) = (
            pair[0].as_u64().unwrap() as usize,
            pair[1].as_u64().unwrap() as usize,
        );
        assert!(cells[x]["dim"].as_u64() < cells[y]["dim"].as_u64());
    }
}

#[test]
fn render_single_triangle() {
    let dir = Scratch::new("render");
    let s = dir.write(
        "s.json",
        &json!({"n": 1, "d": 3, "maximal_cells": ["(123)"]}),
    );
    let out = dir.path("s.svg");
    let o = run_path(
        "render",
        &s,
        &["--mode", "subdivision", "-o", out.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 1);
    assert_eq!(svg.matches(r#"class="vertex""#).count(), 3);

    let w = dir.write("w.json", &json!({"a": [[0, 0]]}));
    let o = run_path(
        "render",
        &w,
        &["--mode", "arrangement", "-o", out.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors_exit_two() {
    let dir = Scratch::new("errors");
    let garbage = dir.path("garbage.json");
    fs::write(&garbage, "{not json").unwrap();
    assert_eq!(run_path("gen", &garbage, &[]).status.code(), Some(2));
    let wrong_tag = dir.write("tag.json", &json!({"format": "other/9", "a": [[0]]}));
    assert_eq!(run_path("gen", &wrong_tag, &[]).status.code(), Some(2));
    let bad_type = dir.write("t.json", &json!({"n": 1, "d": 2, "types": ["(3)"]}));
    assert_eq!(run_path("check-tom", &bad_type, &[]).status.code(), Some(2));
    assert_eq!(
        run_path("gen", &dir.path("missing.json"), &[])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["gen"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn oversized_enumeration_exits_four() {
    let dir = Scratch::new("limit");
    let w = dir.write("w.json", &json!({"a": vec![vec![0; 4]; 8]}));
    let o = run_path("gen", &w, &[]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit"));
}
