use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use pursuit_core::scenario::load_scenario;
use pursuit_core::simulator::{run, Termination};
use pursuit_core::trajectory::{parse_jsonl, read_trajectory, to_jsonl};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pursuit"))
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run_bin(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn error_record(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.trim()).unwrap_or_else(|_| panic!("stderr is not one JSON record: {text}"))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_head_on_reports_capture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.jsonl");
    let o = run_bin(&["simulate", s(&scenario("head_on.json")), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["termination"], "Captured");
    let t = summary["capture_time"].as_f64().unwrap();
    assert!((t - 9.9).abs() <= 0.01, "{t}");

    let traj = read_trajectory(&out).unwrap();
    assert_eq!(traj.version, pursuit_core::VERSION);
    assert_eq!(traj.result.termination, Termination::Captured);
    assert!(traj.result.samples.windows(2).all(|w| w[0].time < w[1].time));
    let last = traj.result.samples.last().unwrap();
    assert!(last.evader.distance(last.pursuers[0]) <= traj.scenario.capture_radius);
}

#[test]
fn trajectory_file_is_self_describing_and_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.jsonl");
    let o = run_bin(&["simulate", s(&scenario("encirclement.json")), "--out", s(&out)]);
    assert!(o.status.success());
    let bytes = fs::read(&out).unwrap();
    let text = String::from_utf8(bytes.clone()).unwrap();
    let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["kind"], "header");
    assert_eq!(first["format"], "pursuit-trajectory");
    assert!(first["scenario"]["dt"].is_f64());
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["kind"], "summary");

    // the parsed file serialises back to the same bytes, and so does a
    // fresh run of the echoed scenario
    let traj = parse_jsonl(&bytes[..]).unwrap();
    assert_eq!(to_jsonl(&traj.scenario, &traj.result).as_bytes(), &bytes[..]);
    let again = run(&traj.scenario).unwrap();
    assert_eq!(to_jsonl(&traj.scenario, &again).as_bytes(), &bytes[..]);
}

#[test]
fn simulate_many_files_into_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    let outdir = dir.path().join("runs");
    let names = ["head_on.json", "symmetric_pair.json", "encirclement.json", "five_pursuers_qualitative.json"];
    let mut args = vec!["simulate".to_string()];
    args.extend(names.iter().map(|n| scenario(n).display().to_string()));
    args.extend(["--out".to_string(), outdir.display().to_string()]);
    let o = bin().args(&args).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let lines: Vec<Value> = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), names.len());
    for (line, name) in lines.iter().zip(names) {
        assert!(line["scenario"].as_str().unwrap().ends_with(name));
        let stem = name.trim_end_matches(".json");
        let path = outdir.join(format!("{stem}.trajectory.jsonl"));
        assert!(path.exists());
        // parallel runs write the same bytes as a sequential one
        let cfg = load_scenario(scenario(name)).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), to_jsonl(&cfg, &run(&cfg).unwrap()));
    }
}

#[test]
fn overrides_take_precedence_over_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.jsonl");
    let o = run_bin(&[
        "simulate",
        s(&scenario("head_on.json")),
        "--dt",
        "0.01",
        "--t-max",
        "1",
        "--seed",
        "9",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success());
    let traj = read_trajectory(&out).unwrap();
    assert_eq!(traj.scenario.dt, 0.01);
    assert_eq!(traj.scenario.t_max, 1.0);
    assert_eq!(traj.scenario.seed, 9);
    assert_eq!(traj.result.termination, Termination::TimeLimit);
    assert_eq!(traj.result.steps, 100);
}

#[test]
fn area_against_monte_carlo() {
    let o = run_bin(&["area", s(&scenario("symmetric_pair.json")), "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let exact = v["exact"].as_f64().unwrap();
    assert!((exact - 54.594208827).abs() < 1e-8);
    assert_eq!(v["pass"], true);
    assert_eq!(v["monte_carlo"]["samples"], 1_000_000);

    let o = run_bin(&["area", s(&scenario("head_on.json")), "--mc-samples", "20000", "--seed", "3"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("exact") && text.contains("monte carlo") && text.trim_end().ends_with("PASS"));
}

#[test]
fn gradcheck_random_and_file() {
    let o = run_bin(&["gradcheck", "--random", "20", "--seed", "11", "--json"]);
    assert!(o.status.success());
    let rows: Vec<Value> = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| r["pass"] == true));

    let o = run_bin(&["gradcheck", s(&scenario("five_pursuers_qualitative.json"))]);
    assert!(o.status.success());

    // the r·L prefactors are off in magnitude and fail the check
    let o = run_bin(&["gradcheck", s(&scenario("head_on.json")), "--statement-form"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_record(&o)["error"], "CheckFailed");
}

#[test]
fn render_symmetric_pair() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_bin(&[
        "render",
        s(&scenario("symmetric_pair.json")),
        "--frames",
        "0,10",
        "--out",
        s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = fs::read_to_string(dir.path().join("frame_00000.svg")).unwrap();
    assert!(svg.contains(r#"version="1.1""#));
    assert_eq!(svg.matches(r#"class="centroid""#).count(), 2);
    assert_eq!(svg.matches(r#"class="safe-set""#).count(), 1);
    assert!(dir.path().join("frame_00010.svg").exists());

    // rendering a trajectory file gives the same frames
    let traj = dir.path().join("p.jsonl");
    assert!(run_bin(&["simulate", s(&scenario("symmetric_pair.json")), "--out", s(&traj)])
        .status
        .success());
    let d2 = dir.path().join("from_traj");
    let o = run_bin(&["render", s(&traj), "--frames", "0", "--out", s(&d2)]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(d2.join("frame_00000.svg")).unwrap(), svg);

    let o = run_bin(&["render", s(&traj), "--frames", "999999", "--out", s(&d2)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_record(&o)["error"], "UsageError");
}

#[test]
fn bad_inputs_produce_error_records() {
    let dir = tempfile::tempdir().unwrap();
    let slow = dir.path().join("slow.json");
    fs::write(
        &slow,
        r#"{"evader": {"position": [0, 0], "speed": 4},
            "pursuers": [{"position": [10, 0], "speed": 6}, {"position": [0, 10], "speed": 3}]}"#,
    )
    .unwrap();
    let o = run_bin(&["simulate", s(&slow), "--out", s(&dir.path().join("x.jsonl"))]);
    assert_eq!(o.status.code(), Some(2));
    let rec = error_record(&o);
    assert_eq!(rec["error"], "ValidationError");
    assert_eq!(rec["fields"][0]["field"], "pursuers[1].speed");

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{ not json").unwrap();
    let o = run_bin(&["area", s(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_record(&o)["error"], "ParseError");

    let o = run_bin(&["simulate", s(&scenario("head_on.json")), "--dt", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_record(&o)["fields"][0]["field"], "dt");

    let o = run_bin(&["gradcheck"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_record(&o)["error"], "UsageError");
}

#[test]
fn five_pursuer_file_loads_with_three_contributing() {
    let cfg = load_scenario(scenario("five_pursuers_qualitative.json")).unwrap();
    assert_eq!(cfg.pursuers.len(), 5);
    assert_eq!(cfg.evader.speed, 4.0);
    let speeds: Vec<f64> = cfg.pursuers.iter().map(|p| p.speed).collect();
    assert_eq!(speeds, [6.0, 6.0, 12.0, 10.0, 9.0]);
    let b = pursuit_core::safeset::boundary(&cfg.evader, &cfg.pursuers).unwrap();
    let mut owners: Vec<usize> = b.arcs.iter().map(|a| a.disc_index).collect();
    owners.sort();
    assert_eq!(owners, [1, 2, 3]);
}
