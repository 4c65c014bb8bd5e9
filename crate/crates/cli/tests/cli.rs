use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn phtk(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phtk")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))).unwrap()
}

fn points(v: &Value) -> Vec<(f64, f64)> {
    v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_f64().unwrap(), p[1].as_f64().unwrap_or(f64::INFINITY)))
        .collect()
}

fn square(dir: &Path) {
    fs::write(dir.join("square.csv"), "0,0\n1,0\n1,1\n0,1\n").unwrap();
}

fn write_diagram(dir: &Path, name: &str, dim: usize, pts: &[(f64, f64)]) {
    let pts: Vec<[f64; 2]> = pts.iter().map(|&(b, d)| [b, d]).collect();
    fs::write(dir.join(name), serde_json::json!({ "dim": dim, "points": pts }).to_string()).unwrap();
}

fn distance(dir: &Path, extra: &[&str]) -> f64 {
    let mut args = vec!["distance", "a.json", "b.json"];
    args.extend_from_slice(extra);
    let out = phtk(dir, &args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(printed, json(dir.join("distance.json")));
    printed["distance"].as_f64().unwrap()
}

#[test]
fn persist_unit_square() {
    let tmp = TempDir::new().unwrap();
    square(tmp.path());
    let out = phtk(tmp.path(), &["persist", "--input", "square.csv", "--out-dir", "out"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let h1 = points(&json(tmp.path().join("out/diagram_dim1.json")));
    assert_eq!(h1.len(), 1);
    assert!((h1[0].0 - 1.0).abs() < 1e-9 && (h1[0].1 - 2f64.sqrt()).abs() < 1e-9);
    let h0 = points(&json(tmp.path().join("out/diagram_dim0.json")));
    assert_eq!(h0.iter().filter(|p| p.1.is_infinite()).count(), 1);
    assert_eq!(h0.iter().filter(|p| *p == &(0.0, 1.0)).count(), 3);
    let csv = fs::read_to_string(tmp.path().join("out/lifetimes.csv")).unwrap();
    assert!(csv.starts_with("# config: {"));
    assert!(csv.lines().nth(2).unwrap().starts_with("0,3,1,1.0,1.0,"));
}

#[test]
fn persist_generated_circle_has_one_dominant_loop() {
    let tmp = TempDir::new().unwrap();
    let out = phtk(tmp.path(), &["persist", "--shape", "circle", "--n", "60"]);
    assert_eq!(code(&out), 0);
    let mut lifetimes: Vec<f64> =
        points(&json(tmp.path().join("diagram_dim1.json"))).iter().map(|(b, d)| d - b).collect();
    lifetimes.sort_by(|a, b| b.total_cmp(a));
    assert!(lifetimes[0] >= 1.0);
    assert!(lifetimes[1..].iter().all(|&l| l <= 0.2));
}

#[test]
fn missing_input_is_io_error_without_outputs() {
    let tmp = TempDir::new().unwrap();
    let out = phtk(tmp.path(), &["persist", "--input", "absent.csv", "--out-dir", "out"]);
    assert_eq!(code(&out), 2);
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn malformed_input_is_io_error() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("ragged.csv"), "0,0\n1\n").unwrap();
    assert_eq!(code(&phtk(tmp.path(), &["persist", "--input", "ragged.csv"])), 2);
    fs::write(tmp.path().join("a.json"), "{\"dim\": 0, \"points\": [[1]]}").unwrap();
    write_diagram(tmp.path(), "b.json", 0, &[]);
    assert_eq!(code(&phtk(tmp.path(), &["distance", "a.json", "b.json"])), 2);
}

#[test]
fn config_errors_exit_1() {
    let tmp = TempDir::new().unwrap();
    square(tmp.path());
    for args in [
        &["persist", "--input", "square.csv", "--max-dim", "9"][..],
        &["persist", "--input", "square.csv", "--max-radius", "-1"],
        &["persist", "--input", "square.csv", "--no-such-flag"],
        &["persist"],
        &["frobnicate"],
        &["optimize", "--input", "square.csv", "--dims", "1,0", "--weights", "1"],
        &["optimize", "--input", "square.csv", "--functional", "wasserstein"],
    ] {
        let out = phtk(tmp.path(), args);
        assert_eq!(code(&out), 1, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(fs::read_dir(tmp.path()).unwrap().count(), 1);
}

#[test]
fn help_exits_0() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&phtk(tmp.path(), &["--help"])), 0);
    assert_eq!(code(&phtk(tmp.path(), &["persist", "--help"])), 0);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("run.cfg"), "# generator\nshape = circle\nn = 30\nnoise_sd = 0.1\nseed = 4\n").unwrap();
    assert_eq!(code(&phtk(tmp.path(), &["gen", "--config", "run.cfg", "--output", "a.csv"])), 0);
    assert_eq!(code(&phtk(tmp.path(), &["gen", "--config", "run.cfg", "--n", "20", "--output", "b.csv"])), 0);
    let rows = |name: &str| {
        fs::read_to_string(tmp.path().join(name)).unwrap().lines().filter(|l| !l.starts_with('#')).count()
    };
    assert_eq!(rows("a.csv"), 30);
    assert_eq!(rows("b.csv"), 20);
    let head = fs::read_to_string(tmp.path().join("b.csv")).unwrap();
    assert!(head.contains("\"seed\":4") && head.contains("\"noise_sd\":0.1"));

    fs::write(tmp.path().join("bad.cfg"), "shape circle\n").unwrap();
    assert_eq!(code(&phtk(tmp.path(), &["gen", "--config", "bad.cfg"])), 1);
    assert_eq!(code(&phtk(tmp.path(), &["gen", "--config", "absent.cfg"])), 2);
}

#[test]
fn distance_examples() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let pts = [(0.1, 0.9), (0.2, 0.5), (0.3, 1.4)];
    write_diagram(dir, "a.json", 1, &pts);
    write_diagram(dir, "b.json", 1, &pts);
    assert_eq!(distance(dir, &[]), 0.0);

    write_diagram(dir, "a.json", 1, &[(0.0, 2.0)]);
    write_diagram(dir, "b.json", 1, &[]);
    assert!((distance(dir, &[]) - 1.0).abs() < 1e-12);
    assert!((distance(dir, &["--method", "bottleneck"]) - 1.0).abs() < 1e-12);
    assert!((distance(dir, &["--method", "sinkhorn", "--alpha", "0.01"]) - 1.0).abs() <= 0.05);

    write_diagram(dir, "a.json", 1, &[(0.1, 0.9), (0.2, 0.5), (0.4, 1.0)]);
    write_diagram(dir, "b.json", 1, &[(0.15, 0.8), (0.3, 1.4)]);
    let exact = distance(dir, &[]);
    let soft = distance(dir, &["--method", "sinkhorn", "--alpha", "0.01"]);
    assert!((soft - exact).abs() <= 0.05 * exact, "{soft} vs {exact}");
}

#[test]
fn distance_dim_mismatch_exits_1() {
    let tmp = TempDir::new().unwrap();
    write_diagram(tmp.path(), "a.json", 0, &[(0.0, 1.0)]);
    write_diagram(tmp.path(), "b.json", 1, &[(0.0, 1.0)]);
    assert_eq!(code(&phtk(tmp.path(), &["distance", "a.json", "b.json"])), 1);
}

#[test]
fn essential_points_need_a_cap_to_count() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("a.json"), r#"{"dim": 0, "points": [[0, 1], [0, "inf"]]}"#).unwrap();
    fs::write(dir.join("b.json"), r#"{"dim": 0, "points": [[0, 1]]}"#).unwrap();
    assert_eq!(distance(dir, &[]), 0.0);
    assert!((distance(dir, &["--essential-cap", "3"]) - 1.5).abs() < 1e-12);
}

#[test]
fn lifetimes_of_diagram_files() {
    let tmp = TempDir::new().unwrap();
    write_diagram(tmp.path(), "a.json", 1, &[(0.0, 0.125), (0.25, 0.3125)]);
    let out = phtk(tmp.path(), &["lifetimes", "a.json", "--bins", "3", "--bin-width", "0.05"]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(tmp.path().join("lifetimes.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[1], "dim,count,essential_count,mean_lifetime,max_lifetime,bin_width,bin_0,bin_1,bin_2");
    assert!(lines[2].starts_with("1,2,0,0.09375,0.125,0.05,") && lines[2].ends_with(",0,1,1"));
}

#[test]
fn gradient_free_optimization_is_flat() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("pair.csv"), "0,0\n1,0\n").unwrap();
    let out = phtk(tmp.path(), &["optimize", "--input", "pair.csv", "--dims", "1", "--steps", "20", "--max-dim", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let traj = fs::read_to_string(tmp.path().join("trajectory.csv")).unwrap();
    let values: Vec<&str> = traj.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(values.len(), 21);
    assert!(values.iter().all(|v| v.parse::<f64>().unwrap() == 0.0));
    let first = fs::read_to_string(tmp.path().join("snapshots/step_000000.csv")).unwrap();
    let last = fs::read_to_string(tmp.path().join("snapshots/step_000020.csv")).unwrap();
    assert_eq!(first, last);
    assert!(fs::read_to_string(tmp.path().join("value.svg")).unwrap().contains("<!-- config: "));
}

fn circle_target(dir: &Path) {
    let out = phtk(dir, &["persist", "--shape", "circle", "--n", "40", "--out-dir", "target"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn blob_descends_toward_circle_diagram() {
    let tmp = TempDir::new().unwrap();
    circle_target(tmp.path());
    let args = [
        "optimize", "--shape", "blob", "--n", "40", "--functional", "wasserstein", "--target",
        "target/diagram_dim1.json", "--lr", "0.1", "--steps", "200",
    ];
    let out = phtk(tmp.path(), &args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let traj = fs::read_to_string(tmp.path().join("trajectory.csv")).unwrap();
    let values: Vec<f64> = traj
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(values[values.len() - 1] <= 0.5 * values[0], "{values:?}");
}

#[test]
fn huge_step_exits_3_with_partial_trajectory() {
    let tmp = TempDir::new().unwrap();
    circle_target(tmp.path());
    let args = [
        "optimize", "--shape", "blob", "--n", "40", "--functional", "wasserstein", "--target",
        "target/diagram_dim1.json", "--lr", "1e3", "--steps", "200", "--out-dir", "run",
    ];
    let out = phtk(tmp.path(), &args);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    let traj = fs::read_to_string(tmp.path().join("run/trajectory.csv")).unwrap();
    let rows = traj.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert!((1..200).contains(&rows));
    assert!(tmp.path().join("run/snapshots/step_000000.csv").exists());
}

#[test]
fn exp2_same_sample_gives_zero_distances() {
    let tmp = TempDir::new().unwrap();
    let out = phtk(tmp.path(), &["exp2", "--n", "25", "--repeats", "2", "--same-sample"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(tmp.path().join("exp2_report.json"));
    let conditions = report["conditions"].as_array().unwrap();
    assert_eq!(conditions.len(), 3);
    for c in conditions {
        for d in c["per_repeat"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()) {
            assert_eq!(d.as_f64(), Some(0.0));
        }
    }
}

#[test]
fn exp2_reports_dims_0_to_2() {
    let tmp = TempDir::new().unwrap();
    let out = phtk(tmp.path(), &["exp2", "--n", "20", "--repeats", "2", "--max-dim", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(tmp.path().join("exp2_report.json"));
    for c in report["conditions"].as_array().unwrap() {
        let summary = c["distance"].as_array().unwrap();
        assert_eq!(summary.len(), 3);
        assert!(summary.iter().all(|s| s["mean"].as_f64().unwrap().is_finite() && s["sd"].is_number()));
    }
    assert!(fs::read_to_string(tmp.path().join("exp2_distances.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn experiments_reject_small_datasets() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&phtk(tmp.path(), &["exp2", "--n", "60", "--synthetic-count", "100"])), 1);
    assert_eq!(code(&phtk(tmp.path(), &["exp1", "--n", "60", "--synthetic-count", "50"])), 1);
    assert_eq!(code(&phtk(tmp.path(), &["exp1", "--n", "10", "--repeats", "0"])), 1);
}

fn zero_idx(path: &Path, count: u32, side: u32) {
    let mut bytes = vec![0, 0, 8, 3];
    for v in [count, side, side] {
        bytes.extend_from_slice(&v.to_be_bytes());
    }
    bytes.resize(bytes.len() + (count * side * side) as usize, 0);
    fs::write(path, bytes).unwrap();
}

#[test]
fn exp1_on_blank_images_is_well_formed() {
    let tmp = TempDir::new().unwrap();
    zero_idx(&tmp.path().join("blank.idx"), 30, 28);
    let out = phtk(tmp.path(), &["exp1", "--input", "blank.idx", "--n", "20", "--noise-sd", "0", "--repeats", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(tmp.path().join("exp1_report.json"));
    for c in report["conditions"].as_array().unwrap() {
        for stats in c["per_repeat"].as_array().unwrap() {
            assert_eq!(stats[1]["count"], 0);
            assert_eq!(stats[0]["essential_count"], 1);
        }
    }
}

#[test]
fn exp1_single_repeat_is_reproducible() {
    let tmp = TempDir::new().unwrap();
    let args = ["exp1", "--n", "40", "--repeats", "1", "--seed", "7"];
    assert_eq!(code(&phtk(tmp.path(), &args)), 0);
    let first = fs::read(tmp.path().join("exp1_report.json")).unwrap();
    assert_eq!(code(&phtk(tmp.path(), &args)), 0);
    assert_eq!(first, fs::read(tmp.path().join("exp1_report.json")).unwrap());
    let report: Value = serde_json::from_slice(&first).unwrap();
    assert!(report["conditions"][0]["mean_lifetime"][1]["sd"].is_null());
}
