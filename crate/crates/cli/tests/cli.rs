use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topraag")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn betti(h: &Value, d: usize) -> u64 {
    h["degrees"][d]["betti"].as_u64().unwrap()
}

#[test]
fn pocket_and_nerve_suites_pass_on_shift_edge() {
    for suite in ["pockets", "nerve", "normal-form", "intersections"] {
        let out = run(&["verify", "--suite", suite, "--graph", &data("edge.json"), "--model", &data("shift2.json")]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json_of(&out)["pass"], Value::Bool(true));
    }
}

#[test]
fn stabilisers_of_the_shift_model_are_infinite() {
    let out = run(&["verify", "--suite", "stabilisers", "--graph", &data("edge.json"), "--model", &data("shift2.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infinite"));
}

#[test]
fn finite_model_suites_pass() {
    for suite in ["pockets", "nerve", "stabilisers"] {
        let out = run(&["verify", "--suite", suite, "--graph", &data("edge.json"), "--model", &data("s3_a3.json")]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn sb_suite_needs_no_inputs() {
    let out = run(&["verify", "--suite", "sb", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["suite"], "sb");
}

#[test]
fn disconnected_graph_with_shift_exits_one_with_hint() {
    let out = run(&["build", "--graph", &data("edge_plus_point.json"), "--model", &data("shift2.json")]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("disconnected"), "{err}");
    assert!(err.contains("hint:"), "{err}");
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(run(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["build", "--graph", "/nonexistent.json", "--model", &data("shift2.json")]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn hollow_square_and_filled_cube() {
    let out = run(&["homology", "--complex", &data("hollow_square.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(betti(&v["reduced"], 0), 0);
    assert_eq!(betti(&v["reduced"], 1), 1);
    assert_eq!(v["euler_characteristic"], 0);

    let v = json_of(&run(&["homology", "--complex", &data("filled_cube.json")]));
    assert_eq!(v["cells_by_dim"], serde_json::json!([8, 12, 6, 1]));
    for d in 0..4 {
        assert_eq!(betti(&v["reduced"], d), 0, "degree {d}");
    }
    assert_eq!(v["euler_characteristic"], 1);
}

#[test]
fn non_closed_complex_exits_one() {
    let dir = std::env::temp_dir().join(format!("topraag-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("open.json");
    std::fs::write(&path, r#"{"cells": [[0], [1], [2], [3], [0, 1, 2, 3]]}"#).unwrap();
    let out = run(&["homology", "--complex", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c4_valley_has_one_dimensional_homology() {
    let out = run(&["homology", "--valley", "--graph", &data("c4.json"), "--latitude", "0", "--window", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert!(betti(&v["reduced"][1], 1) > 0);
    assert_eq!(betti(&v["link_reduced"], 1), 1);
}

#[test]
fn build_export_round_trips_through_homology() {
    let dir = std::env::temp_dir().join(format!("topraag-cli-build-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ball.json");
    let out = run(&[
        "build", "--graph", &data("edge.json"), "--model", &data("shift2.json"), "--radius", "2", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json_of(&out);
    assert_eq!(summary["vertex_degree"], 6);
    assert_eq!(summary["inner_vertex_degrees"], serde_json::json!([6]));
    assert_eq!(summary["dimension"], 2);

    let h = json_of(&run(&["homology", "--complex", path.to_str().unwrap()]));
    assert_eq!(h["cells_by_dim"], summary["cubes_by_dim"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--suite", "intersections", "--graph", &data("edge.json"), "--model", &data("s3_a3.json")];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let build = ["build", "--graph", &data("k3.json"), "--model", &data("trivial.json"), "--radius", "2"];
    assert_eq!(run(&build).stdout, run(&build).stdout);
}

#[test]
fn config_hash_tracks_inputs() {
    let base = ["verify", "--suite", "sb", "--n"];
    let h = |n: &str| {
        let mut args = base.to_vec();
        args.push(n);
        json_of(&run(&args))["config_hash"].as_str().unwrap().to_string()
    };
    assert_eq!(h("2"), h("2"));
    assert_ne!(h("2"), h("3"));
}

#[test]
fn normal_form_of_a_word() {
    let out = run(&["normal-form", "--graph", &data("edge.json"), "--model", &data("shift2.json"), "--word", "s t s^-1 t^-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["exponent"], 0);
}
