use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn anneal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anneal"))
        .args(args)
        .env_remove("ANNEAL_SEED")
        .output()
        .expect("binary runs")
}

fn small_run(out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--out", out.to_str().unwrap(), "--max-epochs", "30", "--steps", "100"];
    args.extend_from_slice(extra);
    anneal(&args)
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .map(|d| d.map(|e| e.unwrap().file_name().into_string().unwrap()).collect())
        .unwrap_or_default();
    v.sort();
    v
}

#[test]
fn run_writes_trace_and_summary() {
    let dir = TempDir::new().unwrap();
    let out = small_run(dir.path(), &["--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        files(dir.path()),
        ["styblinski_tang_2d-quench-bsa-s3.summary.json", "styblinski_tang_2d-quench-bsa-s3.trace.csv"]
    );
    let trace = fs::read_to_string(dir.path().join("styblinski_tang_2d-quench-bsa-s3.trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(
        lines.next().unwrap(),
        "run_id,epoch,step,temperature,cand_pos_0,cand_pos_1,cand_val,decision,cur_val,best_val"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3000);
    assert!(rows.iter().all(|r| {
        let d = r.split(',').nth(7).unwrap();
        ["accept_improve", "accept_random", "reject"].contains(&d)
    }));

    let text = fs::read_to_string(dir.path().join("styblinski_tang_2d-quench-bsa-s3.summary.json")).unwrap();
    let s: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in [
        "objective", "engine", "preset", "seed", "best_pos", "best_val", "converged", "epochs_run", "fcalls",
        "acceptances", "rejections", "samestate_time", "wall_time_s",
    ] {
        assert!(s.get(key).is_some(), "{key}");
    }
    assert!(s["best_val"].as_f64().unwrap() <= 0.0);
    assert_eq!(s["seed"], 3);
    assert_eq!(s["acceptances"].as_u64().unwrap() + s["rejections"].as_u64().unwrap(), 3000);
}

#[test]
fn same_seed_gives_identical_trace_files() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&a, &b] {
        assert!(small_run(d.path(), &["--seed", "11", "--preset", "gsa", "--qv", "2.3", "--qa", "1.4"])
            .status
            .success());
    }
    let name = "styblinski_tang_2d-quench-gsa-s11.trace.csv";
    assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
}

#[test]
fn summary_and_config_reproduce_the_trace() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("exp.json");
    fs::write(
        &cfg,
        r#"{"engine": "chain", "seeds": [5], "limits": {"max_epochs": 3},
            "chain": {"n_sim": 200, "n_chains": 2, "convergence_rtol": 0.0}}"#,
    )
    .unwrap();
    let first = dir.path().join("first");
    let out = anneal(&["run", "--config", cfg.to_str().unwrap(), "--out", first.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(first.join("styblinski_tang_2d-chain-mh-s5.summary.json")).unwrap())
            .unwrap();
    let seed = summary["seed"].as_u64().unwrap().to_string();
    let second = dir.path().join("second");
    let out = anneal(&[
        "run", "--config", cfg.to_str().unwrap(), "--out", second.to_str().unwrap(), "--seed", &seed,
    ]);
    assert!(out.status.success());
    let name = "styblinski_tang_2d-chain-mh-s5.trace.csv";
    let trace = fs::read(first.join(name)).unwrap();
    assert_eq!(trace, fs::read(second.join(name)).unwrap());
    let steps = summary["acceptances"].as_u64().unwrap() + summary["rejections"].as_u64().unwrap();
    assert_eq!(trace.iter().filter(|&&b| b == b'\n').count() as u64, steps + 1);
}

#[test]
fn flags_override_the_file_and_env_seeds_the_default() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("exp.json");
    fs::write(&cfg, r#"{"seeds": [1], "preset": "fsa", "limits": {"max_epochs": 5, "steps_per_epoch": 10}}"#).unwrap();
    let out = anneal(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--seed", "2"]);
    assert!(out.status.success());
    assert!(dir.path().join("styblinski_tang_2d-quench-fsa-s2.trace.csv").exists());
    assert!(!dir.path().join("styblinski_tang_2d-quench-fsa-s1.trace.csv").exists());

    let env_dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_anneal"))
        .args(["run", "--out", env_dir.path().to_str().unwrap(), "--max-epochs", "2", "--steps", "5"])
        .env("ANNEAL_SEED", "42")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(env_dir.path().join("styblinski_tang_2d-quench-bsa-s42.trace.csv").exists());
}

#[test]
fn config_errors_exit_2_without_output() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("out");
    let bad = dir.path().join("bad.json");
    for body in ["{not json", r#"{"objective": {"name": "nope"}}"#, r#"{"t_init": 0}"#, r#"{"colour": 1}"#] {
        fs::write(&bad, body).unwrap();
        let out = anneal(&["run", "--config", bad.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{body}");
        assert!(!out_dir.exists(), "{body}");
    }
    let out = anneal(&["run", "--config", "/nonexistent/exp.json", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
}

#[test]
fn engine_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    // a file where the output directory should be
    let blocker = dir.path().join("taken");
    fs::write(&blocker, "").unwrap();
    let out = small_run(&blocker, &["--seed", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn export_grid_writes_values() {
    let dir = TempDir::new().unwrap();
    let out = anneal(&["run", "--out", dir.path().to_str().unwrap(), "--max-epochs", "1", "--steps", "1", "--export-grid", "3"]);
    assert!(out.status.success());
    let grid = fs::read_to_string(dir.path().join("styblinski_tang_2d.grid.csv")).unwrap();
    let lines: Vec<&str> = grid.lines().collect();
    assert_eq!(lines[0], "x0,x1,value");
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[5], "0.0,0.0,0.0");
    assert_eq!(lines[9], "5.0,5.0,250.0");
    let out = small_run(dir.path(), &["--export-grid", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reductions_default_passes() {
    let out = anneal(&["verify-reductions", "--seeds", "3", "--epochs", "20", "--n-samples", "100000"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("max deviation 0e0 -> identical"), "{text}");
}

#[test]
fn verify_reductions_flags_a_broken_identity() {
    let out = anneal(&["verify-reductions", "--qv", "1.5", "--seeds", "2", "--epochs", "5", "--n-samples", "20000"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("NOT identical"));
}

#[test]
fn list_prints_registry_names() {
    let out = anneal(&["list", "objectives"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).lines().any(|l| l == "styblinski_tang_2d"));
    let out = anneal(&["list", "coolers"]);
    assert!(String::from_utf8_lossy(&out.stdout).lines().any(|l| l == "tsallis"));
    assert_eq!(anneal(&["list", "things"]).status.code(), Some(2));
}
