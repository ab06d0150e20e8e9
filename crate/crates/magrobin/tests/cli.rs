use std::fs;
use std::path::Path;

use magrobin::cli::{parse_pairs, run};
use serde_json::Value;

fn magrobin(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["magrobin".to_string(), "--out".into(), out.display().to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run(argv)
}

fn results(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("results.json")).unwrap()).unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(["magrobin"]), 2);
    assert_eq!(run(["magrobin", "--help"]), 0);
    assert_eq!(run(["magrobin", "frobnicate"]), 2);
    let out = dir.path().join("bad");
    assert_eq!(magrobin(&out, &["solve-1d", "--zeta_typo", "0.1"]), 2);
    // bad keys are rejected before anything is written
    assert!(!out.join("manifest.json").exists());
    assert_eq!(magrobin(&out, &["solve-1d", "--op", "quartic"]), 2);
    assert_eq!(magrobin(&out, &["solve-1d", "--zeta"]), 2);
}

#[test]
fn pairs_accept_both_spellings() {
    let args: Vec<String> = ["--n-points", "11", "--zeta=0.2", "--h_list", "0.1,0.05"].iter().map(|s| s.to_string()).collect();
    let p = parse_pairs(&args).unwrap();
    let keys: Vec<&str> = p.iter().map(|(k, _)| k.as_str()).collect();
    assert_eq!(keys, ["n_points", "zeta", "h_list"]);
    assert!(parse_pairs(&["zeta".to_string()]).is_err());
}

#[test]
fn solve_1d_oscillator_level() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    assert_eq!(magrobin(out, &["solve-1d", "--op", "harm", "--zeta", "0.1", "--xi", "0.05"]), 0);
    let l = results(out)["lambda1"].as_f64().unwrap();
    assert!((l + 0.9975).abs() <= 1e-4, "{l}");
    for f in ["manifest.json", "summary.txt", "eigenvectors.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn table_then_en_gives_quarter_zeta_squared() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    assert_eq!(magrobin(&out, &["perturb-table", "--order", "2", "--cache", cache]), 0);
    let mu = &results(&out)["coefficients"][0];
    assert!((mu[0].as_f64().unwrap() - 0.5).abs() <= 1e-6);
    assert_eq!(fs::read_dir(cache).unwrap().count(), 1);
    assert_eq!(magrobin(&out, &["en", "--zeta", "0.1", "--cache", cache]), 0);
    let e = results(&out)["value"].as_f64().unwrap();
    assert!((e - 0.0025).abs() <= 1e-4, "{e}");
    // the second command reused the cached table
    assert_eq!(fs::read_dir(cache).unwrap().count(), 1);
}

#[test]
fn config_file_supplies_and_command_line_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "op = \"harm\"\nzeta = 0.1\nxi = 0.3\n").unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let cfg = cfg.to_str().unwrap();
    assert_eq!(magrobin(&a, &["--config", cfg, "solve-1d", "--xi", "0.05"]), 0);
    assert_eq!(magrobin(&b, &["solve-1d", "--zeta", "0.1", "--xi", "0.05"]), 0);
    assert_eq!(fs::read(a.join("results.json")).unwrap(), fs::read(b.join("results.json")).unwrap());

    let nested = dir.path().join("nested.toml");
    fs::write(&nested, "[solver]\ntol = 1e-9\n").unwrap();
    assert_eq!(magrobin(&a, &["--config", nested.to_str().unwrap(), "solve-1d"]), 2);
}

#[test]
fn manifest_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(magrobin(&a, &["theta", "--gamma", "-0.5", "--n-points", "1001"]), 0);
    let manifest = a.join("manifest.json");
    assert_eq!(magrobin(&b, &["--manifest", manifest.to_str().unwrap()]), 0);
    for f in ["manifest.json", "results.json", "summary.txt", "trace.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn reruns_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let args = ["sweep", "--h-list", "0.04,0.02,0.01,0.005", "--epsilon", "0.5", "--jobs", "2"];
    assert_eq!(magrobin(out, &args), 0);
    let first: Vec<Vec<u8>> = ["results.json", "sweep.csv", "summary.txt"].iter().map(|f| fs::read(out.join(f)).unwrap()).collect();
    assert_eq!(magrobin(out, &args), 0);
    let second: Vec<Vec<u8>> = ["results.json", "sweep.csv", "summary.txt"].iter().map(|f| fs::read(out.join(f)).unwrap()).collect();
    assert_eq!(first, second);

    // the sweep's own CSV feeds the fit command
    let fit_out = dir.path().join("fit");
    let input = out.join("sweep.csv");
    assert_eq!(magrobin(&fit_out, &["fit", "--input", input.to_str().unwrap()]), 0);
    assert!(results(&fit_out)["exponent"].as_f64().unwrap() > 1.5);
}

#[test]
fn failures_write_an_error_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let code = magrobin(out, &["sweep", "--solver", "strip", "--h-list", "0.04,0.02,0.01,0.005", "--max-dimension", "10"]);
    assert_eq!(code, 1);
    let err: Value = serde_json::from_str(&fs::read_to_string(out.join("error.json")).unwrap()).unwrap();
    assert_eq!(err["error"], "budget");
    assert_eq!(magrobin(out, &["fit"]), 2);
}
