use std::path::Path;
use std::process::{Command, Output};

use isd_core::estimator::{read_csv, Algorithm, Model};
use isd_core::isd::SdInstance;
use isd_core::linalg::FqVector;
use serde_json::Value;

fn isd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn solve_and_verify(inst_path: &Path, args: &[&str]) -> Value {
    let mut all = vec!["solve", path(inst_path)];
    all.extend_from_slice(args);
    let rep = json(&isd(&all));
    let inst = SdInstance::from_json(&std::fs::read_to_string(inst_path).unwrap()).unwrap();
    let e: Vec<u16> = serde_json::from_value(rep["solution"].clone()).unwrap();
    let e = FqVector::new(inst.weight_function().field(), e).unwrap();
    assert!(inst.verify_solution(&e));
    rep
}

#[test]
fn sphere_queries() {
    let v = json(&isd(&["sphere", "--q", "5", "--weight", "lee", "--omega", "1.2"]));
    assert!((v["s"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    for l in v["lambda"].as_array().unwrap() {
        assert!((l.as_f64().unwrap() - 0.2).abs() < 1e-9);
    }
    let v = json(&isd(&["sphere", "--q", "5", "--weight", "lee", "--n", "2", "--w", "2", "--exact"]));
    assert_eq!(v["count"], "8");
    let v = json(&isd(&["sphere", "--q", "3", "--weight", "hamming", "--omega", "0.5"]));
    assert!((v["s"].as_f64().unwrap() - 0.946395).abs() < 1e-6);
}

#[test]
fn input_errors_exit_with_2() {
    assert_eq!(isd(&["sphere", "--q", "5", "--omega", "2.5"]).status.code(), Some(2));
    assert_eq!(isd(&["sphere", "--q", "6", "--omega", "1"]).status.code(), Some(2));
    assert_eq!(isd(&["sphere", "--q", "5"]).status.code(), Some(2));
    assert_eq!(isd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(isd(&["solve", "/nonexistent.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(isd(&["solve", path(&bad)]).status.code(), Some(2));
    let unwritable = dir.path().join("missing").join("out.csv");
    let out = isd(&["sweep", "--q", "3", "--R", "0.5", "--steps", "4", "--out", path(&unwritable)]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_isd"))
        .args(["sphere", "--q", "5", "--omega", "1"])
        .env("ISD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_then_solve_with_prange() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let out = isd(&[
        "gen", "--q", "3", "--weight", "hamming", "--n", "16", "--k", "8", "--w", "4", "--seed", "5",
        "--out", path(&inst),
    ]);
    assert!(out.status.success());
    solve_and_verify(&inst, &["--alg", "prange", "--seed", "1"]);
    // bad parameters for the instance
    let out = isd(&["solve", path(&inst), "--alg", "prange", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = isd(&["solve", path(&inst), "--alg", "stern"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_weight_instance_takes_one_loop() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("zero.json");
    assert!(isd(&["gen", "--q", "5", "--n", "10", "--k", "5", "--w", "0", "--out", path(&inst)])
        .status
        .success());
    let rep = solve_and_verify(&inst, &[]);
    assert_eq!(rep["outer_loops"], 1);
    assert_eq!(rep["solution"], serde_json::json!([0, 0, 0, 0, 0, 0, 0, 0, 0, 0]));
}

#[test]
fn wagner1_over_ten_seeds() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..10 {
        let inst = dir.path().join(format!("w{seed}.json"));
        let s = seed.to_string();
        assert!(isd(&[
            "gen", "--q", "3", "--n", "24", "--k", "8", "--w", "6", "--seed", &s, "--out",
            path(&inst),
        ])
        .status
        .success());
        solve_and_verify(
            &inst,
            &["--alg", "wagner1", "--a", "2", "--ell", "4", "--p", "4", "--seed", &s],
        );
    }
}

#[test]
fn budget_exhaustion_exits_with_3() {
    // x + y = 0 over F_3 has no solution of Hamming weight 1
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("none.json");
    std::fs::write(
        &inst,
        r#"{"q":3,"n":2,"k":1,"w":1,"weight":"hamming","H":[[1,1]],"s":[0]}"#,
    )
    .unwrap();
    let out = isd(&["solve", path(&inst), "--max-loops", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(rep["solution"].is_null());
    assert_eq!(rep["outer_loops"], 5);
}

#[test]
fn solve_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("d.json");
    isd(&["gen", "--q", "5", "--n", "20", "--k", "10", "--w", "6", "--seed", "3", "--out", path(&inst)]);
    let args = ["solve", path(&inst), "--alg", "dumer", "--ell", "2", "--p", "2", "--seed", "9"];
    let a = isd(&args);
    let b = isd(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn estimate_points() {
    let v = json(&isd(&["estimate", "--q", "5", "--R", "0.5", "--omega", "0", "--model", "both"]));
    for r in v.as_array().unwrap() {
        assert_eq!(r["row"]["alpha_bin"], 0.0);
    }
    let v = json(&isd(&["estimate", "--q", "3", "--R", "0.370", "--omega", "1", "--model", "classical"]));
    let alpha = v[0]["row"]["alpha_bin"].as_f64().unwrap();
    assert!((alpha - 0.269).abs() < 0.01, "{alpha}");
    assert_eq!(
        isd(&["estimate", "--q", "3", "--R", "1.5", "--omega", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn hardest_row_for_q3() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h.csv");
    assert!(isd(&["hardest", "--q", "3", "--model", "classical", "--out", path(&csv)])
        .status
        .success());
    let rows = read_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    let r = &rows[0];
    assert_eq!((r.q, r.model, r.algorithm), (3, Model::Classical, Algorithm::Wagner));
    assert!((r.alpha_q - 0.170).abs() <= 0.005);
    assert!((r.r - 0.370).abs() <= 0.02);
    assert!((r.omega_normalized - 1.0).abs() < 1e-3);
    assert!((r.alpha_bin - r.alpha_q * 3f64.log2()).abs() < 5e-4);
}

#[test]
fn sweep_has_two_maxima_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let st = isd(&[
            "sweep", "--q", "5", "--R", "0.5", "--model", "classical", "--alg", "wagner", "--steps",
            "200", "--out", path(out),
        ]);
        assert!(st.status.success());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let rows = read_csv(&bytes[..]).unwrap();
    assert_eq!(rows.len(), 201);
    let mut buf = Vec::new();
    isd_core::estimator::write_csv(&rows, &mut buf).unwrap();
    assert_eq!(buf, bytes);

    let alpha: Vec<f64> = rows.iter().map(|r| r.alpha_q).collect();
    assert_eq!(alpha[0], 0.0);
    // between the two peaks the exponent is zero up to optimizer noise
    let rise = |i: usize, j: usize| alpha[i] > alpha[j] + 1e-9;
    let n = alpha.len();
    let maxima = (1..n)
        .filter(|&i| rise(i, i - 1) && (i == n - 1 || !rise(i + 1, i)))
        .count();
    assert_eq!(maxima, 2, "{alpha:?}");
}

#[test]
fn selftest_rejects_a_corrupt_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.json");
    std::fs::write(&table, r#"{"q": 5, "table": [1, 1, 2, 2, 1]}"#).unwrap();
    let out = isd(&["selftest", "--weight", path(&table), "--q", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("table"));
}

#[test]
fn custom_table_drives_gen_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.json");
    std::fs::write(&table, r#"{"q": 5, "table": [0, 1, 3, 3, 1]}"#).unwrap();
    let inst = dir.path().join("i.json");
    assert!(isd(&[
        "gen", "--q", "5", "--weight", path(&table), "--n", "14", "--k", "7", "--w", "6", "--out",
        path(&inst),
    ])
    .status
    .success());
    solve_and_verify(&inst, &["--alg", "dumer", "--ell", "2", "--p", "2"]);
}
