use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hermblock_cli::MatrixFile;
use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hermblock"));
    c.env_remove("HERMBLOCK_MAX_DIM");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Runs with `--json --no-timing` and parses the report.
fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json", "--no-timing"];
    all.extend_from_slice(args);
    let o = run(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("bad report ({e}): {}\n{}", stdout(&o), String::from_utf8_lossy(&o.stderr))
    });
    (code(&o), v)
}

fn real_matrix(rows: &[&[f64]]) -> Value {
    let data: Vec<Value> = rows.iter().flat_map(|r| r.iter().map(|&x| json!([x, 0.0]))).collect();
    json!({"rows": rows.len(), "cols": rows[0].len(), "data": data})
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn block_file(dir: &TempDir, name: &str, beta: usize, rows: &[&[f64]]) -> PathBuf {
    let n = rows.len() / beta;
    write(dir, name, &json!({"beta": beta, "n": n, "matrix": real_matrix(rows)}))
}

fn rank_one(dir: &TempDir) -> PathBuf {
    block_file(
        dir,
        "rank_one.json",
        2,
        &[&[1.0, 0.0, 0.0, 1.0], &[0.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 1.0]],
    )
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn rows_ref(m: &[Vec<f64>]) -> Vec<&[f64]> {
    m.iter().map(Vec::as_slice).collect()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = dir.path().join(name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", p(&out)]);
    let o = run(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn hiroshima_passes_on_generated_separable_instance() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "sep.json", &["--method", "separable", "--seed", "7", "--beta", "3", "--n", "2"]);
    let (c, v) = run_json(&["verify", "hiroshima", p(&f)]);
    assert_eq!(c, 0);
    assert_eq!(v["certificates"][0]["passed"], json!(true));
}

#[test]
fn hiroshima_on_rank_one_needs_force_and_then_fails() {
    let dir = TempDir::new().unwrap();
    let f = rank_one(&dir);
    let o = run(&["verify", "hiroshima", p(&f)]);
    assert_eq!(code(&o), 4);

    let (c, v) = run_json(&["verify", "hiroshima", "--force", p(&f)]);
    assert_eq!(c, 1);
    let items = v["certificates"][0]["items"].as_array().unwrap();
    let first = &items[0];
    assert_eq!(first["label"], json!("j=1"));
    assert!((first["margin"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert_eq!(v["certificates"][0]["context"]["hypothesis"], json!("violated_forced"));
}

#[test]
fn human_report_lists_margins() {
    let dir = TempDir::new().unwrap();
    let f = rank_one(&dir);
    let o = run(&["--no-timing", "verify", "hiroshima", "--force", p(&f)]);
    let text = stdout(&o);
    assert!(text.contains("FAIL"), "{text}");
    assert!(text.contains("VIOLATED"), "{text}");
    assert!(text.contains("tolerance"), "{text}");
    assert!(!text.contains("wall time"), "{text}");
}

#[test]
fn trace_concave_partial_report_exits_with_hypothesis_code() {
    let dir = TempDir::new().unwrap();
    let f = rank_one(&dir);
    let (c, v) = run_json(&["verify", "trace-concave", p(&f)]);
    assert_eq!(c, 4);
    assert_eq!(v["certificates"][0]["context"]["hypothesis"], json!("violated_partial"));
    assert_eq!(v["certificates"][0]["items"].as_array().unwrap().len(), 1);

    let g = generate(&dir, "gram.json", &["--method", "gram", "--seed", "3", "--beta", "2", "--n", "2"]);
    for f_name in ["sqrt", "log1p", "power:0.5", "clamp:1", "affine:0.5,2"] {
        let (c, _) = run_json(&["verify", "trace-concave", "--f", f_name, p(&g)]);
        assert_eq!(c, 0, "{f_name}");
    }
    assert_eq!(code(&run(&["verify", "trace-concave", "--f", "cube", p(&g)])), 2);
}

#[test]
fn determinant_with_zero_off_diagonal_has_zero_upper_margin() {
    let dir = TempDir::new().unwrap();
    let f = block_file(
        &dir,
        "diag.json",
        2,
        &[&[2.0, 0.5, 0.0, 0.0], &[0.5, 1.0, 0.0, 0.0], &[0.0, 0.0, 3.0, 0.0], &[0.0, 0.0, 0.0, 1.0]],
    );
    let (c, v) = run_json(&["verify", "determinant", p(&f)]);
    assert_eq!(c, 0);
    let items = v["certificates"][0]["items"].as_array().unwrap();
    let upper = items.iter().find(|i| i["label"] == json!("upper")).unwrap();
    assert!(upper["margin"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn remaining_checks_pass_on_valid_inputs() {
    let dir = TempDir::new().unwrap();
    let g = generate(&dir, "g.json", &["--method", "gram", "--seed", "11", "--beta", "4", "--n", "2"]);
    assert_eq!(run_json(&["verify", "eigen-step", p(&g)]).0, 0);
    assert_eq!(run_json(&["verify", "eigen-avg", "--k", "1", p(&g)]).0, 0);
    assert_eq!(run_json(&["verify", "eigen-avg", "--k", "1", "--splits", "4,0,0,0", p(&g)]).0, 0);
    assert_eq!(code(&run(&["verify", "eigen-avg", "--k", "1", "--splits", "1,1", p(&g)])), 2);

    let two = generate(&dir, "two.json", &["--method", "projected", "--seed", "5", "--beta", "2", "--n", "3"]);
    for pval in ["1", "2", "inf"] {
        assert_eq!(run_json(&["verify", "norm-bound", "--p", pval, p(&two)]).0, 0, "p={pval}");
    }

    let fam = generate(&dir, "fam.json", &["--method", "commuting", "--seed", "2", "--beta", "3", "--n", "3"]);
    let (c, v) = run_json(&["verify", "rearrange", p(&fam)]);
    assert_eq!(c, 0);
    assert_eq!(v["certificates"].as_array().unwrap().len(), 2);
    assert_eq!(run_json(&["verify", "rearrange", "--mode", "norms", p(&fam)]).0, 0);

    let z = generate(&dir, "z.json", &["--method", "separable-state", "--seed", "9", "--beta", "2", "--n", "3", "--k", "4", "--normalized"]);
    assert_eq!(run_json(&["verify", "nielsen-kempe", p(&z)]).0, 0);
}

#[test]
fn nielsen_kempe_rejects_complex_first_factor() {
    let dir = TempDir::new().unwrap();
    let a = json!({"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.0, 0.5], [0.0, -0.5], [1.0, 0.0]]});
    let b = real_matrix(&[&[1.0]]);
    let f = write(&dir, "z.json", &json!({"terms": [{"a": a, "b": b}]}));
    assert_eq!(code(&run(&["verify", "nielsen-kempe", p(&f)])), 4);
}

#[test]
fn invalid_inputs_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{not json").unwrap();
    assert_eq!(code(&run(&["verify", "hiroshima", p(&junk)])), 2);
    assert_eq!(code(&run(&["verify", "hiroshima", "/nonexistent/file.json"])), 2);

    let nonherm = block_file(&dir, "nh.json", 2, &[&[1.0, 1.0], &[0.0, 1.0]]);
    assert_eq!(code(&run(&["verify", "hiroshima", p(&nonherm)])), 2);

    let indefinite = block_file(&dir, "neg.json", 2, &[&[1.0, 2.0], &[2.0, 1.0]]);
    assert_eq!(code(&run(&["verify", "hiroshima", p(&indefinite)])), 2);

    let plain = write(&dir, "plain.json", &real_matrix(&[&[1.0, 0.0], &[0.0, 1.0]]));
    assert_eq!(code(&run(&["verify", "hiroshima", p(&plain)])), 2);
    assert_eq!(code(&run(&["verify", "hiroshima", "--beta", "2", p(&plain)])), 0);
    assert_eq!(code(&run(&["verify", "hiroshima", "--beta", "3", p(&plain)])), 2);

    let short = write(&dir, "short.json", &json!({"rows": 2, "cols": 2, "data": [[1.0, 0.0]]}));
    assert_eq!(code(&run(&["verify", "hiroshima", "--beta", "2", p(&short)])), 2);

    assert_eq!(code(&run(&["--tol", "-1", "verify", "hiroshima", "--beta", "2", p(&plain)])), 2);
    assert_eq!(code(&run(&["verify", "no-such-check", p(&plain)])), 2);
}

#[test]
fn generate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["--method", "separable", "--seed", "42", "--beta", "3", "--n", "2"];
    let a = generate(&dir, "a.json", &args);
    let b = generate(&dir, "b.json", &args);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let c = generate(&dir, "c.json", &["--method", "separable", "--seed", "43", "--beta", "3", "--n", "2"]);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());

    let v: Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(v["provenance"]["method"], json!("separable"));
    assert_eq!(v["provenance"]["seed"], json!(42));
}

#[test]
fn generate_from_config_file_matches_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", &json!({"seed": 4, "method": "gram", "alpha": 2, "n": 3}));
    let a = generate(&dir, "a.json", &["--config", p(&cfg)]);
    let b = generate(&dir, "b.json", &["--method", "gram", "--seed", "4", "--beta", "2", "--n", "3"]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let bad = write(&dir, "bad.json", &json!({"seed": 4, "method": "gram", "beta": 0, "n": 3}));
    let out = dir.path().join("x.json");
    assert_eq!(code(&run(&["generate", "--config", p(&bad), "--out", p(&out)])), 2);
}

#[test]
fn gram_output_passes_hiroshima() {
    let dir = TempDir::new().unwrap();
    for seed in ["1", "2", "3"] {
        let f = generate(&dir, "g.json", &["--method", "gram", "--seed", seed, "--beta", "3", "--n", "2"]);
        assert_eq!(code(&run(&["verify", "hiroshima", p(&f)])), 0, "seed {seed}");
    }
}

#[test]
fn projected_with_iteration_cap_one_fails_with_residuals() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("p.json");
    let o = run(&["generate", "--method", "projected", "--seed", "1", "--beta", "3", "--n", "2", "--cap", "1", "--out", p(&out)]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("residual"), "{err}");
    assert!(!out.exists());
}

#[test]
fn two_block_on_all_ones_reconstructs() {
    let dir = TempDir::new().unwrap();
    let f = block_file(&dir, "ones.json", 2, &[&[1.0, 1.0], &[1.0, 1.0]]);
    let out = dir.path().join("d.json");
    let (c, v) = run_json(&["decompose", "--kind", "two-block", p(&f), "--out", p(&out)]);
    assert_eq!(c, 0);
    let d = &v["decomposition"];
    assert!(d["residual"].as_f64().unwrap() <= 1e-12);
    assert_eq!(d["isometries"], json!(2));
    assert!(d["isometry_defects"].as_array().unwrap().iter().all(|x| x.as_f64().unwrap() <= 1e-12));
    let written: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(written["weight"], json!(0.5));
    assert_eq!(written["isometries"].as_array().unwrap().len(), 2);
}

#[test]
fn two_block_refuses_non_hermitian_off_diagonal() {
    let dir = TempDir::new().unwrap();
    let f = rank_one(&dir);
    assert_eq!(code(&run(&["decompose", "--kind", "two-block", p(&f)])), 2);
}

#[test]
fn pinch_of_direct_sum_is_exact() {
    let dir = TempDir::new().unwrap();
    let f = block_file(
        &dir,
        "ab.json",
        2,
        &[&[2.0, 1.0, 0.0, 0.0], &[1.0, 2.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 3.0]],
    );
    let out = dir.path().join("d.json");
    let (c, v) = run_json(&["decompose", "--kind", "pinch", p(&f), "--out", p(&out)]);
    assert_eq!(c, 0);
    assert_eq!(v["decomposition"]["residual"].as_f64().unwrap(), 0.0);
    let written: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    // V_1 is the injection onto the first two coordinates.
    let v1 = &written["isometries"][0];
    assert_eq!(v1["rows"], json!(4));
    assert_eq!(v1["cols"], json!(2));
    let data = v1["data"].as_array().unwrap();
    let entries: Vec<f64> = data.iter().map(|z| z[0].as_f64().unwrap()).collect();
    assert_eq!(entries, vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
}

#[test]
fn clifford_pads_three_blocks_to_four() {
    let dir = TempDir::new().unwrap();
    let f = block_file(&dir, "a3.json", 3, &[&[2.0, 1.0, 0.5], &[1.0, 2.0, 1.0], &[0.5, 1.0, 2.0]]);
    assert_eq!(code(&run(&["decompose", "--kind", "clifford", p(&f)])), 2);
    let (c, v) = run_json(&["decompose", "--kind", "clifford", "--pad", p(&f)]);
    assert_eq!(c, 0);
    let d = &v["decomposition"];
    assert_eq!(d["beta"], json!(4));
    assert_eq!(d["m"], json!(16));
    assert!(d["residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn clifford_large_beta_requires_structured_path() {
    let dir = TempDir::new().unwrap();
    let id = identity(8);
    let f = block_file(&dir, "i8.json", 8, &rows_ref(&id));
    assert_eq!(code(&run(&["decompose", "--kind", "clifford", p(&f)])), 3);

    let out = dir.path().join("s.json");
    let (c, v) = run_json(&["decompose", "--kind", "clifford", "--structured", p(&f), "--out", p(&out)]);
    assert_eq!(c, 0);
    let d = &v["decomposition"];
    assert_eq!(d["m"], json!(256));
    assert_eq!(d["probes"], json!(16));
    assert!(d["residual"].as_f64().unwrap() <= 1e-9);
    assert!(d["isometry_defects"].as_array().unwrap().iter().all(|x| x.as_f64().unwrap() <= 1e-10));
    assert!(out.exists());
}

#[test]
fn dense_cap_override_gives_resource_code() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "g.json", &["--method", "gram", "--seed", "1", "--beta", "2", "--n", "2"]);
    let o = bin().env("HERMBLOCK_MAX_DIM", "2").args(["verify", "hiroshima", p(&f)]).output().unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn search_budget_zero_evaluates_nothing() {
    let (c, v) = run_json(&["search", "--budget", "0"]);
    assert_eq!(c, 0);
    assert_eq!(v["search"]["message"], json!("no candidate evaluated"));
    let o = run(&["search", "--budget", "0"]);
    assert!(stdout(&o).contains("no candidate evaluated"));
}

#[test]
fn search_self_test_replays_rank_one_margin() {
    let (c, v) = run_json(&["search", "--self-test"]);
    assert_eq!(c, 0);
    assert!((v["search"]["best_margin"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn hermitian_restricted_search_finds_nothing() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("cand.json");
    let (c, v) = run_json(&["search", "--budget", "200", "--seed", "3", "--hermitian-only", "--out", p(&out)]);
    assert_eq!(c, 0);
    assert_eq!(v["search"]["evaluated"], json!(200));
    assert!(v["search"]["best_margin"].as_f64().unwrap() <= 0.0);
    assert!(!out.exists());
    assert_eq!(code(&run(&["search", "--n", "0"])), 2);
}

#[test]
fn matrix_files_round_trip_exactly() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "p.json", &["--method", "projected", "--seed", "8", "--beta", "2", "--n", "3"]);
    let first = MatrixFile::read(&f).unwrap();
    let copy = write(&dir, "copy.json", &first.to_value());
    let second = MatrixFile::read(&copy).unwrap();
    assert_eq!(first, second);
    assert_eq!(first.matrix().data(), second.matrix().data());
}

#[test]
fn reports_are_reproducible_and_saved() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "g.json", &["--method", "gram", "--seed", "1", "--beta", "2", "--n", "2"]);
    let r = dir.path().join("r.json");
    let mut saved = Vec::new();
    for _ in 0..2 {
        let o = run(&["--no-timing", "--report", p(&r), "verify", "hiroshima", p(&f)]);
        assert_eq!(code(&o), 0);
        saved.push(fs::read(&r).unwrap());
    }
    assert_eq!(saved[0], saved[1]);
    let r1 = r;
    let v: Value = serde_json::from_slice(&fs::read(&r1).unwrap()).unwrap();
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(v.get("wall_time_seconds").is_none());

    let (_, timed) = {
        let o = run(&["--json", "verify", "hiroshima", p(&f)]);
        (code(&o), serde_json::from_slice::<Value>(&o.stdout).unwrap())
    };
    assert!(timed["wall_time_seconds"].as_f64().is_some());
}

#[test]
fn custom_tolerance_is_recorded() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "g.json", &["--method", "gram", "--seed", "1", "--beta", "2", "--n", "2"]);
    let (c, v) = run_json(&["--tol", "1e-6", "verify", "hiroshima", p(&f)]);
    assert_eq!(c, 0);
    assert_eq!(v["tolerance"], json!(1e-6));
    assert_eq!(v["certificates"][0]["context"]["base_tolerance"], json!(1e-6));
}
