use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn config(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str], model: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vaforms"))
        .args(args)
        .arg("--model")
        .arg(model)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const HEIS0: &str = r#"{"type":"heisenberg","k":"0","max_degree":4}"#;
const A1: &str = r#"{"type":"lattice","generators":["g"],"N":[[-2]],"max_degree":1,"max_weight_len":2}"#;

#[test]
fn dims_match_partition_counts() {
    let f = config(HEIS0);
    let out = run(&["dims", "--format", "csv"], f.path());
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "weight,degree,dimension\n0,0,1\n0,1,1\n0,2,2\n0,3,3\n0,4,5\n"
    );
}

#[test]
fn lattice_dims_by_degree() {
    let f = config(A1);
    let v = json(&run(&["dims"], f.path()));
    let mut by_degree = [0u64; 2];
    for b in v["blocks"].as_array().unwrap() {
        by_degree[b["degree"].as_i64().unwrap() as usize] += b["dimension"].as_u64().unwrap();
    }
    assert_eq!(by_degree, [1, 3]);
}

#[test]
fn gram_blocks() {
    let f = config(HEIS0);
    let v = json(&run(&["gram", "--degree", "1", "--weight", "0"], f.path()));
    assert_eq!(v["gram"], serde_json::json!([["-1"]]));
    let v = json(&run(&["gram", "--degree", "2", "--weight", "0"], f.path()));
    assert_eq!(v["gram"], serde_json::json!([["-2", "0"], ["0", "2"]]));
    assert_eq!(v["symmetric"], true);

    let a1 = config(A1);
    let v = json(&run(&["gram", "--degree", "1"], a1.path()));
    assert_eq!(v["rank"], 3);
    let v = json(&run(&["gram", "--degree", "1", "--weight", "0"], a1.path()));
    assert_eq!(v["gram"], serde_json::json!([["-2"]]));
}

#[test]
fn radical_reports_exactness() {
    let f = config(HEIS0);
    let v = json(&run(&["radical"], f.path()));
    assert_eq!(v["kind"], "zero");
    for b in v["blocks"].as_array().unwrap() {
        assert_eq!(b["radical_dim"], 0);
        assert_eq!(b["exactness"], "exact");
    }
    let k1 = config(r#"{"type":"heisenberg","k":"1","max_degree":3}"#);
    let v = json(&run(&["radical"], k1.path()));
    assert_eq!(v["kind"], "full");
}

#[test]
fn explicit_functional() {
    let f = config(HEIS0);
    let func = config(r#"{"values":[{"weight":[0],"index":0,"value":"3/2"}]}"#);
    let out = run(&["gram", "--degree", "1", "--weight", "0", "--functional", func.path().to_str().unwrap()], f.path());
    assert!(out.status.success());
    assert_eq!(json(&out)["gram"], serde_json::json!([["-3/2"]]));

    // At k = 1 the unit lies in D*A_1, so no nonzero functional is valid.
    let k1 = config(r#"{"type":"heisenberg","k":"1","max_degree":3}"#);
    let out = run(&["gram", "--degree", "1", "--weight", "0", "--functional", func.path().to_str().unwrap()], k1.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_and_echoes_seed() {
    let f = config(r#"{"type":"heisenberg","k":"1/2","max_degree":3}"#);
    let out = run(&["verify", "--suite", "all", "--seed", "99", "--samples", "20"], f.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["seed"], 99);
    assert_eq!(v["passed"], true);
    assert!(v["reports"].as_array().unwrap().iter().all(|r| r["seed"] == 99));
}

#[test]
fn free_model_passes_verification() {
    let f = config(r#"{"type":"free","generators":["g"],"N":[[-2]],"max_degree":3,"max_weight_len":2}"#);
    let out = run(&["verify", "--suite", "all", "--samples", "20"], f.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn corrupted_cocycle_fails_axioms_with_witness() {
    let f = config(
        r#"{"type":"lattice","generators":["g"],"N":[[-2]],"max_degree":2,"max_weight_len":2,"corrupt_cocycle":[[1],[-1]]}"#,
    );
    let out = run(&["verify", "--suite", "axioms", "--samples", "10"], f.path());
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    let axioms = &v["reports"][0];
    assert_eq!(axioms["suite"], "axioms");
    assert!(axioms["witness"].as_str().unwrap().contains("commutator identity fails"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let f = config(A1);
    let args = ["verify", "--suite", "all", "--seed", "5", "--samples", "30"];
    let (a, b) = (run(&args, f.path()), run(&args, f.path()));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run(&["radical"], f.path()).stdout, run(&["radical"], f.path()).stdout);
}

#[test]
fn exit_codes() {
    let bad_key = config(r#"{"type":"heisenberg","k":"0","max_degree":4,"colour":"red"}"#);
    assert_eq!(run(&["dims"], bad_key.path()).status.code(), Some(2));
    let odd = config(r#"{"type":"lattice","generators":["g"],"N":[[1]],"max_degree":2,"max_weight_len":1}"#);
    assert_eq!(run(&["dims"], odd.path()).status.code(), Some(2));
    let degenerate = config(r#"{"type":"lattice","generators":["a","b"],"N":[[2,2],[2,2]],"max_degree":2,"max_weight_len":1}"#);
    assert_eq!(run(&["dims"], degenerate.path()).status.code(), Some(2));
    assert_eq!(run(&["dims"], Path::new("/nonexistent/model.json")).status.code(), Some(2));

    let f = config(HEIS0);
    assert_eq!(run(&["verify", "--suite", "nonsense"], f.path()).status.code(), Some(2));
    assert_eq!(run(&["radical", "--format", "csv"], f.path()).status.code(), Some(2));
    let out = run(&["gram", "--degree", "9", "--weight", "0"], f.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cutoff exceeded"));
}

#[test]
fn cutoff_overrides_apply() {
    let f = config(HEIS0);
    let out = run(&["dims", "--format", "csv", "--max-degree", "6"], f.path());
    assert!(String::from_utf8(out.stdout).unwrap().ends_with("0,5,7\n0,6,11\n"));
}
