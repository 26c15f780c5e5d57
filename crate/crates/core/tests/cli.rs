use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn betadyne(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betadyne")).args(args).output().unwrap()
}

fn run_ok(args: &[&str]) -> Output {
    let out = betadyne(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const SWEEP: [&str; 10] = [
    "--scenario",
    "driven-qubit",
    "--set",
    "sweep.param=params.omega",
    "--set",
    "sweep.min=0.1",
    "--set",
    "sweep.max=1.0",
    "--set",
    "sweep.points=91",
];

#[test]
fn spectrum_finds_driven_qubit_merge() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    let mut args = vec!["spectrum"];
    args.extend(SWEEP);
    args.extend(["--out", out.to_str().unwrap()]);
    run_ok(&args);
    let summary = read_json(&out.join("spectrum_summary.json"));
    assert!((summary["at_param"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let csv = std::fs::read_to_string(out.join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "param,branch_index,re_E,im_E,min_gap,max_overlap");
    assert_eq!(csv.lines().count(), 1 + 2 * 91);

    let manifest = read_json(&out.join("manifest.json"));
    let listed: Vec<&str> = manifest["files"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    for entry in std::fs::read_dir(&out).unwrap() {
        let name = entry.unwrap().file_name();
        assert!(listed.contains(&name.to_str().unwrap()), "{name:?} missing from manifest");
    }
}

#[test]
fn outputs_are_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut hashes = Vec::new();
    for (k, threads) in ["1", "4"].iter().enumerate() {
        let out = dir.path().join(format!("t{k}"));
        run_ok(&[
            "trajectories",
            "--scenario",
            "driven-qubit",
            "--set",
            "ensemble.trajectories=300",
            "--seed",
            "9",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        let csv = std::fs::read(out.join("trajectories.csv")).unwrap();
        let summary = std::fs::read(out.join("summary.json")).unwrap();
        hashes.push((csv, summary, read_json(&out.join("manifest.json"))["config_hash"].clone()));
    }
    assert_eq!(hashes[0], hashes[1]);
}

#[test]
fn config_hash_follows_content() {
    let dir = tempfile::tempdir().unwrap();
    let hash = |name: &str, points: &str| {
        let out = dir.path().join(name);
        let set = format!("sweep.points={points}");
        run_ok(&[
            "spectrum",
            "--scenario",
            "driven-qubit",
            "--set",
            "sweep.param=params.omega",
            "--set",
            "sweep.min=0.1",
            "--set",
            "sweep.max=1.0",
            "--set",
            &set,
            "--out",
            out.to_str().unwrap(),
        ]);
        read_json(&out.join("manifest.json"))["config_hash"].as_str().unwrap().to_string()
    };
    assert_eq!(hash("a", "11"), hash("b", "11"));
    assert_ne!(hash("a", "11"), hash("c", "12"));
}

#[test]
fn ep_find_over_beta_and_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("beta");
    run_ok(&[
        "ep-find",
        "--scenario",
        "driven-qubit",
        "--set",
        "params.omega=0.75",
        "--set",
        "search.tol=1e-6",
        "--out",
        out.to_str().unwrap(),
    ]);
    let ep = read_json(&out.join("ep.json"));
    let z = &ep["location"]["complex"];
    assert!(z["re"].as_f64().unwrap().abs() < 1e-5);
    assert!((z["im"].as_f64().unwrap() - 5.0 / 24.0).abs() < 1e-5);
    assert_eq!(ep["converged"], Value::Bool(true));

    // default tolerance sits at the numerical floor; unconverged is still exit 0
    let out = dir.path().join("omega");
    run_ok(&[
        "ep-find",
        "--scenario",
        "driven-qubit",
        "--set",
        "search.over=params.omega",
        "--set",
        "search.min=0.1",
        "--set",
        "search.max=1.0",
        "--set",
        "unraveling.beta.im=0",
        "--out",
        out.to_str().unwrap(),
    ]);
    let ep = read_json(&out.join("ep.json"));
    assert!((ep["location"]["real"].as_f64().unwrap() - 0.5).abs() < 1e-6);
}

#[test]
fn overlap_map_origin_is_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m");
    run_ok(&[
        "overlap-map",
        "--scenario",
        "gain-loss-qubit",
        "--set",
        "grid.re=[0,0]",
        "--set",
        "grid.im=[0,0]",
        "--set",
        "grid.points=1",
        "--out",
        out.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(out.join("overlap_map.csv")).unwrap();
    let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[2], 0.0);
}

#[test]
fn validate_and_scenario_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v");
    let o = run_ok(&["validate", "--set", "validate.cases=10", "--out", out.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&o.stdout).lines().all(|l| l.starts_with("PASS")));
    assert_eq!(read_json(&out.join("validate.json"))["passed"], Value::Bool(true));

    let out = dir.path().join("d");
    run_ok(&["scenario-dump", "--scenario", "kerr", "--format", "json", "--out", out.to_str().unwrap()]);
    let model = read_json(&out.join("model.json"));
    assert_eq!(model["dim"], 3);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let o = out.to_str().unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["spectrum", "--set", "bogus=1", "--out", o],
        vec!["spectrum", "--scenario", "no-such-thing", "--out", o],
        vec![
            "spectrum",
            "--scenario",
            "driven-qubit",
            "--set",
            "sweep.param=params.omega",
            "--set",
            "sweep.points=1",
            "--out",
            o,
        ],
        vec![
            "trajectories",
            "--scenario",
            "driven-qubit",
            "--set",
            "time.steps=2",
            "--set",
            "unraveling.beta.re=5",
            "--out",
            o,
        ],
        vec!["spectrum", "--config", "/nonexistent/config.json", "--out", o],
    ] {
        let res = betadyne(&args);
        assert_eq!(res.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&res.stderr));
        assert!(!res.stderr.is_empty());
    }
}

#[test]
fn non_hermitian_model_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"dim": 2, "hamiltonian": {"re": [[0, 1], [0, 0]]},
            "channels": [{"rate": 1, "operator": {"re": [[0, 0], [1, 0]]}}],
            "sweep": {"param": "unraveling.beta.re", "min": 0, "max": 1, "points": 3}}"#,
    )
    .unwrap();
    let res =
        betadyne(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_ne!(res.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&res.stderr).to_lowercase().contains("hermitian"));
}
