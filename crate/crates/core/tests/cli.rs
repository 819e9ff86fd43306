use std::path::Path;
use std::process::{Command, Output};

use dynamite::bench::BENCH_COLUMNS;
use dynamite::estimators::{hoeffding_sample_complexity, ConcentrationParams};
use serde_json::Value;

fn dynamite(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynamite"))
        .args(args)
        .env_remove("DYNAMITE_OUT_DIR")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn keys(v: &Value) -> Vec<String> {
    let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
    k.sort();
    k
}

fn write_graph(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn analyze_chain_schema_and_values() {
    let v = json(&dynamite(&[
        "analyze-chain", "--chain", "cycle", "--n", "8", "--fn", "cycle-f", "--i", "1", "--T", "1,64",
    ]));
    assert_eq!(keys(&v), ["chain", "lazy", "profile", "states", "summary"]);
    assert_eq!(
        keys(&v["summary"]),
        ["lambda", "mean", "pi_min", "relaxation_time", "reversible", "stationary", "variance"]
    );
    assert_eq!(
        keys(&v["profile"][0]),
        ["horizon", "lower", "sandwich_holds", "trace_variance", "upper"]
    );
    let v_pi = v["summary"]["variance"].as_f64().unwrap();
    assert!((v_pi - 0.25).abs() < 1e-12);
    assert!((v["profile"][0]["trace_variance"].as_f64().unwrap() - v_pi).abs() < 1e-12);
    assert_eq!(v["profile"][1]["horizon"], 64);
}

#[test]
fn malformed_flags_exit_with_usage() {
    let out = dynamite(&["analyze-chain", "--n", "eight"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(dynamite(&["estimate", "--delta", "0"]).status.code(), Some(2));
    assert_eq!(dynamite(&["estimate", "--replicates", "0"]).status.code(), Some(2));
}

#[test]
fn estimate_is_byte_identical_on_rerun() {
    let args = ["estimate", "--n", "8", "--i", "1", "--method", "dynamite", "--seed", "9", "--replicates", "1"];
    let a = dynamite(&args);
    let b = dynamite(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(keys(&v), ["chain", "delta", "epsilon", "lambda", "lambda_source", "method", "runs", "summary", "truth"]);
    assert_eq!(
        keys(&v["runs"][0]["report"]),
        [
            "chain_steps", "delta", "epsilon", "estimate", "iterations", "lambda_bound", "schedule",
            "seed", "termination", "total_steps", "trace_length", "warmup_steps"
        ]
    );
}

#[test]
fn estimate_coverage_and_static_budget() {
    let v = json(&dynamite(&[
        "estimate", "--n", "8", "--i", "1", "--method", "dynamite", "--epsilon", "0.05", "--delta", "0.1",
        "--replicates", "200", "--seed", "3",
    ]));
    assert!(v["summary"]["coverage"].as_f64().unwrap() >= 0.9);

    let v = json(&dynamite(&[
        "estimate", "--n", "8", "--i", "1", "--method", "static-hoeffding", "--epsilon", "0.05", "--delta", "0.1",
        "--replicates", "20", "--seed", "3",
    ]));
    let lambda = v["lambda"].as_f64().unwrap();
    let m_h = hoeffding_sample_complexity(&ConcentrationParams::new(lambda, 1.0, 0.1, 1).unwrap(), 0.05).unwrap();
    for run in v["runs"].as_array().unwrap() {
        assert_eq!(run["report"]["total_steps"].as_u64().unwrap(), m_h);
    }
    assert!(v["summary"]["coverage"].as_f64().unwrap() >= 0.9);
}

#[test]
fn explicit_lambda_and_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dynamite"))
        .args(["estimate", "--chain", "uniform", "--n", "2", "--fn", "indicator", "--states", "1", "--lambda", "0"])
        .env("DYNAMITE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("estimate.json")).unwrap()).unwrap();
    assert_eq!(v["lambda_source"], "explicit");
    assert_eq!(v["truth"], 0.5);
}

#[test]
fn count_colorings_with_exact_check() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write_graph(dir.path(), "c4.json", r#"{"n": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]}"#);
    let v = json(&dynamite(&["count-colorings", "--graph", &c4, "--k", "3", "--exact", "--seed", "1"]));
    assert_eq!(v["exact_count"], 18);
    assert!(v["relative_error"].as_f64().unwrap() <= 0.3);
    assert!(v["log_estimate"].is_f64());
    assert!(v["estimate_decimal"].is_string());
    assert_eq!(v["phases"].as_array().unwrap().len(), 4);
    assert_eq!(v["lambda_defaulted"], true);

    let empty = write_graph(dir.path(), "empty.json", r#"{"n": 5, "edges": []}"#);
    let v = json(&dynamite(&["count-colorings", "--graph", &empty, "--k", "2"]));
    assert_eq!(v["estimate_decimal"], "32");
    assert_eq!(v["total_steps"], 0);
}

#[test]
fn ergodicity_floor_is_a_guard_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let edges: Vec<String> = (1..21).map(|v| format!("[0,{v}]")).collect();
    let star = write_graph(dir.path(), "star.json", &format!(r#"{{"n": 21, "edges": [{}]}}"#, edges.join(",")));
    let out = dynamite(&["count-colorings", "--graph", &star, "--k", "21"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ergodicity floor"));

    let bad = write_graph(dir.path(), "bad.json", r#"{"n": 2, "edges": [[0,5]]}"#);
    assert_eq!(dynamite(&["count-colorings", "--graph", &bad, "--k", "3"]).status.code(), Some(2));
}

#[test]
fn degenerate_phase_estimate_is_a_statistical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write_graph(dir.path(), "edge.json", r#"{"n": 2, "edges": [[0,1]]}"#);
    let codes: Vec<i32> = (0..100)
        .map(|seed| {
            dynamite(&[
                "count-colorings", "--graph", &edge, "--k", "2", "--estimator", "static-hoeffding",
                "--lambda", "0", "--epsilon", "0.99", "--delta", "0.99", "--seed", &seed.to_string(),
            ])
            .status
            .code()
            .unwrap()
        })
        .collect();
    assert!(codes.contains(&4), "{codes:?}");
    assert!(codes.iter().all(|&c| c == 0 || c == 4));
}

#[test]
fn gen_planted_writes_graph_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let out = dynamite(&[
        "gen-planted", "--n", "6", "--r", "2", "--p", "1", "--q", "0", "--seed", "4", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let graph: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(keys(&graph), ["edges", "n"]);
    assert_eq!(graph["edges"].as_array().unwrap().len(), 6);
    let side: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.partition.json")).unwrap()).unwrap();
    assert_eq!(keys(&side), ["communities", "params"]);
    assert_eq!(side["communities"], serde_json::json!([0, 0, 0, 1, 1, 1]));
    assert_eq!(keys(&side["params"]), ["n", "p", "q", "r", "seed"]);

    assert_eq!(
        dynamite(&["gen-planted", "--n", "7", "--r", "2", "--p", "1", "--q", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn bench_compare_csv() {
    let out = dynamite(&["bench-compare", "--problems", ""]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), BENCH_COLUMNS.join(",") + "\n");

    let args = [
        "bench-compare", "--problems", "cycle-f1,cycle-fhalf,planted-count", "--n", "8", "--batches", "2",
        "--epsilon", "0.1", "--count-epsilon", "0.5", "--planted-n", "4", "--seed", "2",
    ];
    let a = String::from_utf8(dynamite(&args).stdout).unwrap();
    let b = String::from_utf8(dynamite(&args).stdout).unwrap();
    let strip = |s: &str| -> Vec<String> {
        s.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
    };
    assert_eq!(strip(&a), strip(&b));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], BENCH_COLUMNS.join(","));
    // 4 methods x 2 cycle problems + 2 counting methods, 2 batches each.
    assert_eq!(lines.len(), 1 + (4 * 2 + 2) * 2);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == BENCH_COLUMNS.len()));
}
