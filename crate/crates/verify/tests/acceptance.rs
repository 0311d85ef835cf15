//! Acceptance checks, one line per criterion:
//!
//! ```text
//! [PASS] 1 gradient correctness: ...
//! ```
//!
//! Runs sequentially (no libtest harness) so the runtime limits are
//! measured without other tests competing for the CPU. Exits nonzero if any
//! criterion fails.

use std::f64::consts::{PI, TAU};
use std::ffi::OsString;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pursuit_core::control::{Headings, HEADING_EPS_REL};
use pursuit_core::geometry::Vec2;
use pursuit_core::gradients::{area_gradients_with, PrefactorForm};
use pursuit_core::oracle;
use pursuit_core::safeset::{active_set, arc_components, arc_range, boundary};
use pursuit_core::simulator::{run, run_with, step, GameState, Termination};
use pursuit_core::trajectory::to_jsonl;
use pursuit_core::GeometryError;
use pursuit_verify::{agent, random_configs, scenario, scenario_path, SHIPPED_SCENARIOS};

const GRAD_REL_TOL: f64 = 1e-5;
const GRAD_RUNTIME: Duration = Duration::from_secs(10);
const MC_SAMPLES: u64 = 1_000_000;
const MC_Z_MAX: f64 = 3.0;
const LENS_REL_TOL: f64 = 1e-9;
const ORACLE_RESOLUTION: usize = 3600;
const FULL_DISC_REL_TOL: f64 = 1e-9;
const TRANSLATION_REL_TOL: f64 = 1e-9;
/// Halving dt must scale the rate error by a factor in this range.
const FIRST_ORDER_RATIO: (f64, f64) = (1.6, 2.4);
const CAPTURE_RUNTIME: Duration = Duration::from_secs(5);
const ALTERNATIVES: usize = 100;
/// Rounding allowance on `F·u*` versus `F·u`, relative to `‖F‖`.
const OPTIMALITY_SLACK: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn gradient_correctness() -> Outcome {
    let t0 = Instant::now();
    let configs = random_configs();
    let mut worst = 0.0f64;
    let mut failures = 0;
    for (e, ps) in &configs {
        let h = oracle::default_fd_step(e, ps);
        match oracle::gradcheck(e, ps, h, PrefactorForm::Integral) {
            Ok(r) => {
                worst = worst.max(r.max_rel_error);
                if r.max_rel_error >= GRAD_REL_TOL {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    let elapsed = t0.elapsed();
    outcome(
        failures == 0 && elapsed < GRAD_RUNTIME,
        format!(
            "{} configs, max rel error {worst:.2e} (< {GRAD_REL_TOL:e}), {failures} failing, {:.3}s (< {}s)",
            configs.len(),
            elapsed.as_secs_f64(),
            GRAD_RUNTIME.as_secs()
        ),
    )
}

fn area_correctness() -> Outcome {
    let configs = random_configs();
    let mut worst_z = 0.0f64;
    let mut outside = Vec::new();
    for (k, (e, ps)) in configs.iter().enumerate() {
        let b = boundary(e, ps).expect("random configurations are valid");
        let mc = oracle::mc_area(&b.discs, MC_SAMPLES, k as u64).expect("mc runs");
        let z = mc.z_score(b.area);
        worst_z = worst_z.max(z);
        if z > MC_Z_MAX {
            outside.push(k);
        }
    }
    let pair = boundary(&agent(0.0, 0.0, 1.0), &[agent(10.0, 0.0, 2.0), agent(-10.0, 0.0, 2.0)]).unwrap();
    let lens = 800.0 * PI / 27.0 - 200.0 * 3f64.sqrt() / 9.0;
    let lens_err = (pair.area - lens).abs() / lens;
    outcome(
        outside.is_empty() && lens_err < LENS_REL_TOL,
        format!(
            "max |z| {worst_z:.2} over {} configs (<= {MC_Z_MAX}), outside: {outside:?}; lens area {:.9} rel err {lens_err:.1e}",
            configs.len(),
            pair.area
        ),
    )
}

/// Whether the oracle mask agrees with the interval `[start, start+width]`
/// up to one bin at each end.
fn mask_matches(mask: &[bool], start: f64, width: f64) -> bool {
    let n = mask.len();
    let bin = TAU / n as f64;
    mask.iter().enumerate().all(|(k, &ok)| {
        let d = (oracle::bin_angle(k, n) - start).rem_euclid(TAU);
        let inside_core = d >= bin && d <= width - bin;
        let outside_band = d > width + bin && d < TAU - bin;
        if width >= TAU || inside_core {
            ok
        } else if outside_band {
            !ok
        } else {
            true
        }
    })
}

fn single_run_arc_ranges() -> Outcome {
    let configs = random_configs();
    let mut checked = 0;
    let mut endpoint_mismatch = 0;
    let mut split = Vec::new();
    let mut split_components_ok = true;
    for (k, (e, ps)) in configs.iter().enumerate() {
        let b = boundary(e, ps).unwrap();
        let active = active_set(&b.discs);
        for &i in &active {
            // the oracle only sees the other active discs
            let sub: Vec<_> = active.iter().map(|&j| b.discs[j]).collect();
            let local = active.iter().position(|&j| j == i).unwrap();
            let mask = oracle::accepted_bins(local, &sub, ORACLE_RESOLUTION).unwrap();
            let runs = oracle::circular_runs(&mask);
            checked += 1;
            match arc_range(i, &b.discs, &active) {
                Ok(iv) => {
                    let ok = if iv.is_empty() {
                        mask.iter().all(|&m| !m)
                    } else {
                        mask_matches(&mask, iv.start(), iv.width())
                    };
                    if !ok || runs > 1 {
                        endpoint_mismatch += 1;
                    }
                }
                Err(GeometryError::AssertionFailure(_)) => {
                    split.push((k, i, runs));
                    // each component still has to agree with the oracle
                    let comps = arc_components(i, &b.discs, &active).unwrap();
                    split_components_ok &= comps.len() == runs
                        && comps.iter().all(|c| {
                            let mut part = mask.clone();
                            // keep only the bins near this component
                            for (kk, m) in part.iter_mut().enumerate() {
                                let d = (oracle::bin_angle(kk, ORACLE_RESOLUTION) - c.start()).rem_euclid(TAU);
                                let bin = TAU / ORACLE_RESOLUTION as f64;
                                if d > c.width() + bin && d < TAU - bin {
                                    *m = false;
                                }
                            }
                            mask_matches(&part, c.start(), c.width())
                        });
                }
                Err(_) => endpoint_mismatch += 1,
            }
        }
    }
    outcome(
        endpoint_mismatch == 0 && split.is_empty(),
        format!(
            "{checked} circles at resolution {ORACLE_RESOLUTION}: {endpoint_mismatch} endpoint mismatches; \
             {} circles with more than one circular run (config, disc, runs): {split:?}; \
             per-component endpoints of those {}",
            split.len(),
            if split_components_ok { "match the oracle" } else { "DO NOT match the oracle" }
        ),
    )
}

fn full_disc_check() -> Outcome {
    let e = agent(0.0, 0.0, 1.0);
    let ps = [agent(10.0, 0.0, 2.0)];
    let b = boundary(&e, &ps).unwrap();
    let g = area_gradients_with(PrefactorForm::Integral, &e, &ps, &b);
    let s = area_gradients_with(PrefactorForm::Statement, &e, &ps, &b);
    let expect = Vec2::new(80.0 * PI / 9.0, 0.0);
    let err = (g.per_pursuer[0] - expect).norm() / expect.norm();
    let stmt_err = (s.per_pursuer[0] - expect).norm() / expect.norm();
    outcome(
        err < FULL_DISC_REL_TOL && stmt_err > 1.0,
        format!(
            "grad_p = ({:.12}, {:.1e}), rel err {err:.1e} (< {FULL_DISC_REL_TOL:e}); statement-form prefactor gives ({:.6}, ...), rel err {stmt_err:.1}",
            g.per_pursuer[0].x, g.per_pursuer[0].y, s.per_pursuer[0].x
        ),
    )
}

fn translation_identity() -> Outcome {
    let configs = random_configs();
    let mut worst = 0.0f64;
    for (e, ps) in &configs {
        let b = boundary(e, ps).unwrap();
        let g = area_gradients_with(PrefactorForm::Integral, e, ps, &b);
        worst = worst.max(g.translation_residual().norm() / g.magnitude());
    }
    outcome(
        worst < TRANSLATION_REL_TOL,
        format!("max |sum F_p + F_e| / gradient scale = {worst:.1e} (< {TRANSLATION_REL_TOL:e}) over {} configs", configs.len()),
    )
}

fn same_topology(a: &GameState, b: &GameState) -> bool {
    a.active_indices == b.active_indices && a.arc_owners() == b.arc_owners()
}

fn rate_consistency() -> Outcome {
    let mut ratios = Vec::new();
    let mut skipped = 0;
    let mut states = 0;
    for name in ["five_pursuers_qualitative.json", "encirclement.json", "head_on.json"] {
        let sc = scenario(name);
        let mut sampled = Vec::new();
        run_with(&sc, |k, s| {
            if k % 100 == 0 {
                sampled.push(s.clone());
            }
        })
        .unwrap();
        let dt0 = 10.0 * sc.dt;
        for s in sampled.iter().filter(|s| s.boundary.is_some()) {
            let predicted = s.optimal_area_rate();
            let mut errs = Vec::new();
            let mut switched = false;
            for h in [dt0, dt0 / 2.0, dt0 / 4.0] {
                let n = step(s, h).unwrap();
                if !same_topology(s, &n) || n.boundary.is_none() {
                    switched = true;
                    break;
                }
                errs.push(((n.area - s.area) / h - predicted).abs());
            }
            if switched {
                skipped += 1;
                continue;
            }
            states += 1;
            ratios.push(errs[0] / errs[1]);
            ratios.push(errs[1] / errs[2]);
        }
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    outcome(
        !ratios.is_empty() && lo >= FIRST_ORDER_RATIO.0 && hi <= FIRST_ORDER_RATIO.1,
        format!(
            "{states} states ({skipped} switching states skipped): error ratio per dt halving in [{lo:.3}, {hi:.3}] (required within [{}, {}])",
            FIRST_ORDER_RATIO.0, FIRST_ORDER_RATIO.1
        ),
    )
}

fn capture_dynamics() -> Outcome {
    let sc = scenario("head_on.json");
    let t0 = Instant::now();
    let r = run(&sc).unwrap();
    let t_head = t0.elapsed();
    let tc = r.capture_time.unwrap_or(f64::NAN);
    let head_ok = r.termination == Termination::Captured && (tc - 9.9).abs() <= 2.0 * sc.dt;

    let sc3 = scenario("encirclement.json");
    let t0 = Instant::now();
    let r3 = run(&sc3).unwrap();
    let t_enc = t0.elapsed();
    let increases = r3.samples.windows(2).filter(|w| w[1].area > w[0].area).count();
    let enc_ok = increases == 0 && r3.final_area < sc3.area_threshold;

    outcome(
        head_ok && enc_ok && t_head < CAPTURE_RUNTIME && t_enc < CAPTURE_RUNTIME,
        format!(
            "head-on {:?} at t = {tc:.6} (9.9 +/- {:.3}), {:.3}s; encirclement {:?}, {increases} area increases over {} samples, final area {:.3e} < {:.3e}, {:.3}s",
            r.termination,
            2.0 * sc.dt,
            t_head.as_secs_f64(),
            r3.termination,
            r3.samples.len(),
            r3.final_area,
            sc3.area_threshold,
            t_enc.as_secs_f64()
        ),
    )
}

fn heading_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut states = 0;
    let mut violations = 0;
    let mut holds = 0;
    for name in ["five_pursuers_qualitative.json", "encirclement.json", "head_on.json", "symmetric_pair.json"] {
        let sc = scenario(name);
        run_with(&sc, |_, s| {
            states += 1;
            // agents with ‖F‖ at or below this hold still by design
            let eps = HEADING_EPS_REL * s.scale();
            let g = &s.gradients;
            let h: Headings = s.headings();
            let alts: Vec<Vec2> = (0..ALTERNATIVES)
                .map(|_| Vec2::from_angle(rng.gen_range(0.0..TAU)))
                .collect();
            holds += h.pursuers.iter().filter(|u| u.is_hold()).count() + h.evader.is_hold() as usize;
            for (f, u) in g.per_pursuer.iter().zip(&h.pursuers) {
                let best = f.dot(u.direction());
                let slack = if u.is_hold() { eps } else { OPTIMALITY_SLACK * f.norm() };
                violations += alts.iter().filter(|a| best > f.dot(**a) + slack).count();
            }
            let best = g.evader.dot(h.evader.direction());
            let slack = if h.evader.is_hold() { eps } else { OPTIMALITY_SLACK * g.evader.norm() };
            violations += alts.iter().filter(|a| best < g.evader.dot(**a) - slack).count();
        })
        .unwrap();
    }
    outcome(
        violations == 0,
        format!("{states} states x {ALTERNATIVES} random unit headings per agent: {violations} violations (holds: {holds} agent-states with |F| <= 1e-12 x scale)"),
    )
}

fn determinism() -> Outcome {
    let names = SHIPPED_SCENARIOS;
    let mut identical = 0;
    for name in names {
        let sc = scenario(name);
        let a = to_jsonl(&sc, &run(&sc).unwrap());
        let b = to_jsonl(&sc, &run(&sc).unwrap());
        if a == b {
            identical += 1;
        }
    }
    // through the CLI in two child processes, then a replay of the header echo
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}.jsonl"));
        let st = Command::new(std::env::current_exe().unwrap())
            .env(CLI_ENV, "1")
            .arg("simulate")
            .arg(scenario_path("five_pursuers_qualitative.json"))
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        assert!(st.status.success());
        files.push(std::fs::read(&out).unwrap());
    }
    let traj = pursuit_core::trajectory::parse_jsonl(&files[0][..]).unwrap();
    let replay = to_jsonl(&traj.scenario, &run(&traj.scenario).unwrap());
    let cli_ok = files[0] == files[1] && replay.as_bytes() == &files[0][..];
    outcome(
        identical == names.len() && cli_ok,
        format!(
            "{identical}/{} scenarios byte-identical across in-process runs; CLI files identical and header replay identical: {cli_ok}",
            names.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

/// Set on a child process to make it run the CLI with the remaining
/// arguments instead of the criteria.
const CLI_ENV: &str = "PURSUIT_VERIFY_CLI";

fn main() -> ExitCode {
    if std::env::var_os(CLI_ENV).is_some() {
        let args = std::iter::once(OsString::from("pursuit")).chain(std::env::args_os().skip(1));
        let code = pursuit_core::cli::main_with(args, &mut std::io::stdout(), &mut std::io::stderr());
        return ExitCode::from(code as u8);
    }
    let criteria: [Criterion; 9] = [
        ("gradient correctness", gradient_correctness),
        ("area correctness", area_correctness),
        ("arc-range oracle agreement and single run", single_run_arc_ranges),
        ("full-disc analytic gradient", full_disc_check),
        ("translation identity", translation_identity),
        ("area-rate consistency", rate_consistency),
        ("capture dynamics", capture_dynamics),
        ("heading optimality", heading_optimality),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
