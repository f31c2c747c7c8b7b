use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use netperm::seed::stream;
use netperm::{
    assign_completely_randomized, gen_small_world, io, outcome_proportion, write_edge_list, Graph, Observations,
    OutcomeParams, SmallWorldSpec,
};
use serde_json::Value;
use tempfile::TempDir;

fn netperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netperm")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = netperm(args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn cycle_fixture(dir: &Path) -> (PathBuf, PathBuf) {
    let edges = write(dir, "g.txt", "# six-cycle with a chord\n6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n0 3\n");
    let data = write(dir, "d.csv", "id,z,y\n0,1,2.5\n1,0,1.0\n2,0,0.2\n3,1,3.1\n4,0,0.9\n5,0,0.1\n");
    (edges, data)
}

#[test]
fn test_command_reports_pvalue_and_seed() {
    let dir = TempDir::new().unwrap();
    let (g, d) = cycle_fixture(dir.path());
    let v = ok_json(&["test", s(&g), s(&d), "--stat", "tbond", "--samples", "200", "--seed", "5"]);
    let p = v["p_value"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&p));
    assert_eq!(v["n_draws"], 200);
    assert_eq!(v["seed"]["master_seed"], 5);
    assert_eq!(v["null_model"]["kind"], "labelled-degree-sequence");

    // same seed, same answer
    let again = ok_json(&["test", s(&g), s(&d), "--stat", "tbond", "--samples", "200", "--seed", "5"]);
    assert_eq!(v, again);
}

#[test]
fn zero_step_chain_with_one_draw_ties() {
    let dir = TempDir::new().unwrap();
    let (g, d) = cycle_fixture(dir.path());
    let v = ok_json(&[
        "test", s(&g), s(&d), "--stat", "tbond", "--samples", "1", "--burn-in-mult", "0", "--thin-mult", "0",
    ]);
    assert_eq!(v["p_value"].as_f64(), Some(0.0));
    assert_eq!(v["n_ties"], 1);
}

#[test]
fn exact_and_other_nulls() {
    let dir = TempDir::new().unwrap();
    let (g, d) = cycle_fixture(dir.path());
    let v = ok_json(&["test", s(&g), s(&d), "--stat", "tbond", "--exact", "--null-class", "iso"]);
    assert_eq!(v["exact"], true);
    for null in ["iso", "blockiso", "er"] {
        let v = ok_json(&["test", s(&g), s(&d), "--stat", "tbond", "--samples", "50", "--null-class", null]);
        assert!((0.0..=1.0).contains(&v["p_value"].as_f64().unwrap()), "{null}");
    }
}

#[test]
fn bad_inputs_fail_with_messages() {
    let dir = TempDir::new().unwrap();
    let (g, _) = cycle_fixture(dir.path());
    let bad_z = write(dir.path(), "bad.csv", "id,z,y\n0,1,1\n1,2,1\n2,0,1\n3,0,1\n4,0,1\n5,0,1\n");
    let out = netperm(&["test", s(&g), s(&bad_z)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let short = write(dir.path(), "short.csv", "id,z,y\n0,1,1\n1,0,1\n");
    assert!(!netperm(&["test", s(&g), s(&short)]).status.success());

    let bad_edges = write(dir.path(), "bad.txt", "3\n0 x\n");
    let out = netperm(&["cluster", s(&bad_edges)]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = netperm(&["test", s(&g), s(&bad_z), "--stat", "tfoo"]);
    assert!(!out.status.success());
}

#[test]
fn cluster_command_emits_partition() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "p.txt", "5\n0 1\n1 2\n2 3\n3 4\n");
    let v = ok_json(&["cluster", s(&g), "--epsilon", "1"]);
    assert_eq!(v["centers"], serde_json::json!([3, 1]));
    assert_eq!(v["clusters"], serde_json::json!([[2, 3, 4], [0, 1]]));
}

#[test]
fn sample_null_emits_degree_preserving_draws() {
    let dir = TempDir::new().unwrap();
    let (g, d) = cycle_fixture(dir.path());
    let graph = io::read_edge_list(&g).unwrap();
    for null in ["degseq", "iso", "blockiso"] {
        let v = ok_json(&["sample-null", s(&g), "--data", s(&d), "--samples", "7", "--null-class", null]);
        let draws = v["draws"].as_array().unwrap();
        assert_eq!(draws.len(), 7);
        for draw in draws {
            let pairs: Vec<(usize, usize)> = serde_json::from_value(draw.clone()).unwrap();
            let h = Graph::new(6, pairs).unwrap();
            assert_eq!(h.labelled_degrees(), graph.labelled_degrees(), "{null}");
        }
    }
    assert!(!netperm(&["sample-null", s(&g), "--null-class", "blockiso"]).status.success());
}

#[test]
fn simulate_is_byte_identical_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let config = write(
        dir.path(),
        "run.toml",
        "networks = [\"small-world\", \"sbm\"]\nsw_n = 80\nsw_k = 4\nreps = 6\nsamples = 25\nseed = 99\n",
    );
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("t{threads}.csv"));
        let res = netperm(&["simulate", "--config", s(&config), "--threads", threads, "--out", s(&out)]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
        outputs.push(fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    // 2 networks x 4 effect pairs x 2 statistics
    assert_eq!(text.lines().count(), 1 + 16);
}

#[test]
fn simulate_flags_override_config() {
    let dir = TempDir::new().unwrap();
    let config = write(dir.path(), "run.toml", "networks = [\"er\"]\ner_n = 40\nreps = 50\nsamples = 10\n");
    let v = ok_json(&[
        "simulate", "--config", s(&config), "--reps", "3", "--tau-spill", "0", "--tau-direct", "0", "--stats",
        "tquant", "--alpha", "1", "--format", "json",
    ]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["reps"], 3);
    assert_eq!(rows[0]["rate"].as_f64(), Some(1.0));
    assert_eq!(v["config"]["samples"], 10);

    let bad = write(dir.path(), "bad.toml", "networks = [\"er\"]\nunknown_key = 3\n");
    assert!(!netperm(&["simulate", "--config", s(&bad)]).status.success());
}

#[test]
fn planted_spillover_is_detected_end_to_end() {
    let dir = TempDir::new().unwrap();
    let mut rng = stream(3, 0, "fixture");
    let g = gen_small_world(&SmallWorldSpec::new(433, 6, 0.1).unwrap(), &mut rng).unwrap();
    let z = assign_completely_randomized(433, 222, &mut rng).unwrap().z;
    let latent = outcome_proportion(&g, &z, &OutcomeParams::new(0.5, 3.0, 0.0, 1.0).unwrap(), &mut rng).unwrap();
    let y = latent.y.iter().map(|&v| f64::from(u8::from(v > 0.5))).collect();
    let edges = dir.path().join("households.txt");
    let data = dir.path().join("households.csv");
    write_edge_list(&g, &edges).unwrap();
    io::write_observations(&Observations { z, y }, &data).unwrap();

    let v = ok_json(&["test", s(&edges), s(&data), "--samples", "1000"]);
    assert!(v["p_value"].as_f64().unwrap() < 0.01, "{v}");
}
