use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use framescale::cli::io::{InstanceFile, ReportFile};
use framescale::frames;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_framescale"));
    c.env_remove("FRAMESCALE_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_report(p: &Path) -> ReportFile {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&[
            "--seed",
            "5",
            "gen",
            "--kind",
            "gaussian",
            "--n",
            "4",
            "--d",
            "2",
            "--out",
            path_str(p),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let c = run(&[
        "--seed", "6", "gen", "--kind", "gaussian", "--n", "4", "--d", "2",
    ]);
    assert_ne!(c.stdout, fs::read(&a).unwrap());
}

#[test]
fn seed_flag_overrides_environment() {
    let with_env = bin()
        .env("FRAMESCALE_SEED", "9")
        .args(["gen", "--kind", "gaussian", "--n", "2", "--d", "2"])
        .output()
        .unwrap();
    let flag = run(&[
        "--seed", "9", "gen", "--kind", "gaussian", "--n", "2", "--d", "2",
    ]);
    assert_eq!(with_env.stdout, flag.stdout);
    let both = bin()
        .env("FRAMESCALE_SEED", "9")
        .args([
            "--seed", "3", "gen", "--kind", "gaussian", "--n", "2", "--d", "2",
        ])
        .output()
        .unwrap();
    let three = run(&[
        "--seed", "3", "gen", "--kind", "gaussian", "--n", "2", "--d", "2",
    ]);
    assert_eq!(both.stdout, three.stdout);
}

#[test]
fn onb_union_has_frame_operator_two() {
    let out = run(&["gen", "--kind", "onb_union", "--n", "6", "--d", "3"]);
    assert!(out.status.success());
    let file = InstanceFile::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let pair = file.to_pair().unwrap();
    let b = frames::bessel_and_frame_bounds(pair.xs()).unwrap();
    assert!((b.lower - 2.0).abs() < 1e-12 && (b.upper - 2.0).abs() < 1e-12);
}

#[test]
fn schauder_mangled_is_schauder() {
    let out = run(&[
        "--seed",
        "2",
        "gen",
        "--kind",
        "schauder_mangled",
        "--n",
        "5",
        "--d",
        "3",
    ]);
    let pair = InstanceFile::from_json(std::str::from_utf8(&out.stdout).unwrap())
        .unwrap()
        .to_pair()
        .unwrap();
    assert!(frames::is_schauder_identity(&pair, 1e-10));
}

#[test]
fn invalid_generation_parameters_fail() {
    assert!(
        !run(&["gen", "--kind", "onb_union", "--n", "5", "--d", "3"])
            .status
            .success()
    );
    assert!(
        !run(&["gen", "--kind", "d1_scalars", "--n", "5", "--d", "2"])
            .status
            .success()
    );
    assert!(!run(&["gen", "--kind", "banana", "--n", "5", "--d", "2"])
        .status
        .success());
}

#[test]
fn analyze_and_rescale_reports() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    // d = 1 closed form: M = Σ|x_k y_k| = 10.1
    fs::write(
        corpus.join("d1.json"),
        r#"{"format_version": 1, "dim": 1,
            "pairs": [{"x": [[10, 0]], "y": [[1, 0]]}, {"x": [[0.1, 0]], "y": [[1, 0]]}]}"#,
    )
    .unwrap();
    let out = run(&[
        "gen",
        "--kind",
        "schauder_mangled",
        "--n",
        "4",
        "--d",
        "2",
        "--out",
        path_str(&corpus.join("s.json")),
    ]);
    assert!(out.status.success());

    let analyze = dir.path().join("an.json");
    let out = run(&["analyze", path_str(&corpus), "--out", path_str(&analyze)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = read_report(&analyze);
    assert_eq!(report.records.len(), 2);
    let d1 = &report.records[0];
    assert!((d1.phi_norm_oracle.unwrap() - 10.1).abs() < 1e-9);
    assert!(d1.ratio.is_none());
    assert!(dir.path().join("an.csv").exists());

    let rescale = dir.path().join("re.json");
    let out = run(&["rescale", path_str(&corpus), "--out", path_str(&rescale)]);
    assert!(out.status.success());
    let report = read_report(&rescale);
    let d1 = &report.records[0];
    assert!((d1.m_upper.unwrap() - 10.1).abs() < 1e-4);
    let s = &report.records[1];
    assert_eq!(s.check_results.get("frames"), Some(&true));
    assert_eq!(report.summary.failures, 0);
}

#[test]
fn malformed_instance_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        "{\"format_version\": 1,\n \"dim\": 2,\n \"pairs\": [}",
    )
    .unwrap();
    let out = run(&["analyze", path_str(&bad)]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");

    fs::write(&bad, r#"{"format_version": 1, "dim": 2, "pairs": [{"x": [[1, 0], [0, 0]], "y": [[0, 0], [0, 0]]}]}"#).unwrap();
    let out = run(&["rescale", path_str(&bad)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("pairs[0].y"));
}

#[test]
fn verify_suites_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("v.json");
    let out = run(&[
        "verify",
        "--suite",
        "khintchine",
        "--out",
        path_str(&out_path),
    ]);
    assert!(out.status.success());
    let out = run(&["verify", "--suite", "dilation"]);
    assert!(out.status.success());
    let out = run(&[
        "verify",
        "--suite",
        "ratio",
        "--instances",
        "10",
        "--n",
        "4",
        "--d",
        "2",
        "--out",
        path_str(&out_path),
    ]);
    assert!(out.status.success());
    let report = read_report(&out_path);
    assert_eq!(report.summary.failures, 0);
    assert!(report.summary.max_ratio.unwrap() <= 2.1);
    let csv = fs::read_to_string(dir.path().join("v.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn bench_empty_grid_and_checksums() {
    let out = run(&["bench", "--grid", ""]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 0);

    let checksum = |o: &Output| {
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["cells"][0]["checksum"].as_str().unwrap().to_string()
    };
    let a = run(&["bench", "--grid", "3x2", "--instances", "2"]);
    let b = run(&["bench", "--grid", "3x2", "--instances", "2"]);
    assert!(a.status.success());
    assert_eq!(checksum(&a), checksum(&b));
}
