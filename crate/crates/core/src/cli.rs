//! The `pursuit` command line.
//!
//! Exit status: 0 when the command's check held, 1 when it ran but the
//! check failed (area outside 3 standard errors, gradient error above
//! tolerance), 2 for bad input, 3 when a simulation or geometry step
//! failed. Every failure also prints one JSON error record on stderr.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{FieldError, GeometryError, OracleError, ScenarioError, SimError};
use crate::geometry::AgentConfig;
use crate::gradients::PrefactorForm;
use crate::oracle::{self, RandomConfigSpec};
use crate::render::{render_svg, Viewport};
use crate::safeset::boundary;
use crate::scenario::{load_scenario, ScenarioConfig};
use crate::simulator::{run, GameState, SimulationResult, Termination};
use crate::trajectory::{self, Trajectory};

/// Relative gradient error accepted by `gradcheck`.
pub const GRADCHECK_TOL: f64 = 1e-5;
/// Standard errors allowed between exact and Monte Carlo area.
pub const AREA_Z_MAX: f64 = 3.0;

#[derive(Debug, Parser)]
#[command(name = "pursuit", version, about = "Multi-pursuer area-minimisation game: simulate, check and render")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run scenarios to termination and write trajectory files.
    Simulate(SimulateArgs),
    /// Compare the exact safe-set area against Monte Carlo.
    Area(AreaArgs),
    /// Compare analytic area gradients against finite differences.
    Gradcheck(GradcheckArgs),
    /// Write SVG snapshots of selected samples.
    Render(RenderArgs),
}

#[derive(Debug, Args, Default, Clone)]
pub struct Overrides {
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    #[arg(long = "t-max", allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(required = true)]
    pub scenarios: Vec<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Trajectory file for a single scenario, or a directory for several.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AreaArgs {
    pub scenario: PathBuf,
    #[arg(long = "mc-samples", default_value_t = 1_000_000)]
    pub mc_samples: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    pub scenario: Option<PathBuf>,
    /// Check this many seeded random configurations instead of a file.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Finite-difference step; defaults to 1e-6 times the configuration scale.
    #[arg(long = "fd-step", allow_negative_numbers = true)]
    pub fd_step: Option<f64>,
    /// Use the `(1−α²) r L` prefactors instead of the exact ones, for
    /// comparison.
    #[arg(long = "statement-form")]
    pub statement_form: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Scenario file (simulated first) or trajectory file.
    pub input: PathBuf,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Sample indices to draw; defaults to the first and last sample.
    #[arg(long, value_delimiter = ',')]
    pub frames: Vec<usize>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{path}: {source}")]
    Simulation { path: PathBuf, source: SimError },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Trajectory(#[from] trajectory::TrajectoryError),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Scenario(e) => e.kind(),
            CliError::Simulation { source: SimError::InvalidScenario(_), .. } => "ValidationError",
            CliError::Simulation { source: SimError::Geometry { source, .. }, .. } => source.kind(),
            CliError::Geometry(e) => e.kind(),
            CliError::Oracle(OracleError::DegenerateProbe { .. }) => "DegenerateProbe",
            CliError::Oracle(OracleError::InvalidArgument(_)) => "InvalidArgument",
            CliError::Trajectory(_) => "TrajectoryError",
            CliError::Output { .. } => "IoError",
            CliError::Usage(_) => "UsageError",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Simulation { source: SimError::Geometry { .. }, .. }
            | CliError::Geometry(_)
            | CliError::Oracle(OracleError::DegenerateProbe { .. }) => 3,
            _ => 2,
        }
    }

    /// The machine-readable error record printed on stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let mut rec = json!({ "error": self.kind(), "message": self.to_string() });
        let fields = |errs: &[FieldError]| {
            errs.iter()
                .map(|e| json!({ "field": e.field, "message": e.message }))
                .collect::<Vec<_>>()
        };
        match self {
            CliError::Scenario(ScenarioError::Validation(errs))
            | CliError::Simulation { source: SimError::InvalidScenario(errs), .. } => {
                rec["fields"] = json!(fields(errs));
            }
            CliError::Scenario(ScenarioError::Io { path, .. }) | CliError::Output { path, .. } => {
                rec["path"] = json!(path);
            }
            _ => {}
        }
        if let CliError::Simulation { path, source } = self {
            rec["path"] = json!(path);
            if let SimError::Geometry { snapshot, .. } = source {
                rec["state"] = json!({
                    "time": snapshot.time,
                    "dt": snapshot.dt,
                    "evader": snapshot.evader,
                    "pursuers": snapshot.pursuers,
                });
            }
        }
        rec
    }
}

fn load_with(path: &Path, ov: &Overrides) -> Result<ScenarioConfig, CliError> {
    let mut cfg = load_scenario(path)?;
    if let Some(dt) = ov.dt {
        cfg.dt = dt;
    }
    if let Some(t) = ov.t_max {
        cfg.t_max = t;
    }
    if let Some(s) = ov.seed {
        cfg.seed = s;
    }
    cfg.validate()
        .map_err(|errs| CliError::Scenario(ScenarioError::Validation(errs)))?;
    Ok(cfg)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Serialize)]
struct RunSummary<'a> {
    scenario: &'a Path,
    trajectory: &'a Path,
    termination: Termination,
    capture_time: Option<f64>,
    final_area: f64,
    steps: u64,
    events: usize,
}

fn trajectory_path(input: &Path, out: Option<&Path>, many: bool) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
    let name = format!("{stem}.trajectory.jsonl");
    match out {
        Some(o) if many || o.is_dir() => o.join(name),
        Some(o) => o.to_path_buf(),
        None => PathBuf::from(name),
    }
}

/// Simulates every file (in parallel) and prints one JSON summary line per
/// file. Fails on the first error in input order.
pub fn cmd_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let many = args.scenarios.len() > 1;
    if let (true, Some(dir)) = (many, &args.out) {
        fs::create_dir_all(dir).map_err(|source| CliError::Output {
            path: dir.clone(),
            source,
        })?;
    }
    let results: Vec<Result<(PathBuf, ScenarioConfig, SimulationResult), CliError>> = args
        .scenarios
        .par_iter()
        .map(|path| {
            let cfg = load_with(path, &args.overrides)?;
            let res = run(&cfg).map_err(|source| CliError::Simulation {
                path: path.clone(),
                source,
            })?;
            let out = trajectory_path(path, args.out.as_deref(), many);
            write_file(&out, &trajectory::to_jsonl(&cfg, &res))?;
            Ok((out, cfg, res))
        })
        .collect();
    for (path, r) in args.scenarios.iter().zip(results) {
        let (out, _, res) = r?;
        let summary = RunSummary {
            scenario: path,
            trajectory: &out,
            termination: res.termination,
            capture_time: res.capture_time,
            final_area: res.final_area,
            steps: res.steps,
            events: res.events.len(),
        };
        let _ = writeln!(stdout, "{}", serde_json::to_string(&summary).expect("summary serializes"));
    }
    Ok(true)
}

/// Exact versus Monte Carlo area of the scenario's initial configuration.
pub fn cmd_area(args: &AreaArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let cfg = load_scenario(&args.scenario)?;
    let seed = args.seed.unwrap_or(cfg.seed);
    let b = boundary(&cfg.evader, &cfg.pursuers)?;
    let mc = oracle::mc_area(&b.discs, args.mc_samples, seed)?;
    let z = mc.z_score(b.area);
    let ok = z <= AREA_Z_MAX;
    if args.json {
        let rec = json!({
            "exact": b.area,
            "monte_carlo": mc,
            "z": z,
            "active": b.active,
            "arcs": b.arcs.iter().map(|a| a.disc_index).collect::<Vec<_>>(),
            "pass": ok,
        });
        let _ = writeln!(stdout, "{rec}");
    } else {
        let _ = writeln!(stdout, "{:<14} {:>20}", "quantity", "value");
        let _ = writeln!(stdout, "{:<14} {:>20.12}", "exact", b.area);
        let _ = writeln!(stdout, "{:<14} {:>20.12}", "monte carlo", mc.mean);
        let _ = writeln!(stdout, "{:<14} {:>20.12}", "std error", mc.std_error);
        let _ = writeln!(stdout, "{:<14} {:>20}", "samples", mc.samples);
        let _ = writeln!(stdout, "{:<14} {:>20}", "seed", mc.seed);
        let _ = writeln!(stdout, "{:<14} {:>20.4}", "|z|", z);
        let _ = writeln!(stdout, "{}", if ok { "PASS" } else { "FAIL" });
    }
    Ok(ok)
}

fn check_one(
    label: &str,
    evader: &AgentConfig,
    pursuers: &[AgentConfig],
    args: &GradcheckArgs,
    stdout: &mut dyn Write,
) -> Result<bool, CliError> {
    let h = args.fd_step.unwrap_or_else(|| oracle::default_fd_step(evader, pursuers));
    let form = if args.statement_form {
        PrefactorForm::Statement
    } else {
        PrefactorForm::Integral
    };
    let rep = oracle::gradcheck(evader, pursuers, h, form)?;
    let ok = rep.max_rel_error < GRADCHECK_TOL;
    if args.json {
        let rec = json!({ "config": label, "fd_step": h, "report": rep, "pass": ok });
        let _ = writeln!(stdout, "{rec}");
    } else {
        let _ = writeln!(stdout, "# {label} (h = {h:e})");
        let _ = writeln!(
            stdout,
            "{:<12} {:>16} {:>16} {:>16} {:>16} {:>10}",
            "agent", "analytic.x", "analytic.y", "fd.x", "fd.y", "rel.err"
        );
        for r in &rep.rows {
            let _ = writeln!(
                stdout,
                "{:<12} {:>16.9} {:>16.9} {:>16.9} {:>16.9} {:>10.2e}",
                r.agent, r.analytic.x, r.analytic.y, r.finite_difference.x, r.finite_difference.y, r.rel_error
            );
        }
        let _ = writeln!(
            stdout,
            "max rel error {:.3e} {}",
            rep.max_rel_error,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    Ok(ok)
}

/// Analytic versus finite-difference gradients for a scenario file or for
/// `--random N` seeded configurations.
pub fn cmd_gradcheck(args: &GradcheckArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    if let Some(h) = args.fd_step {
        if !(h > 0.0 && h.is_finite()) {
            return Err(CliError::Usage(format!("--fd-step must be positive, got {h}")));
        }
    }
    if let Some(n) = args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let spec = RandomConfigSpec::default();
        let mut all = true;
        for k in 0..n {
            let (e, ps) = oracle::random_configuration(&mut rng, &spec);
            all &= check_one(&format!("random {k} (seed {})", args.seed), &e, &ps, args, stdout)?;
        }
        return Ok(all);
    }
    let path = args.scenario.as_ref().expect("clap requires a scenario");
    let cfg = load_scenario(path)?;
    check_one(&path.display().to_string(), &cfg.evader, &cfg.pursuers, args, stdout)
}

fn load_run(args: &RenderArgs) -> Result<(ScenarioConfig, SimulationResult), CliError> {
    let text = fs::read_to_string(&args.input).map_err(|source| ScenarioError::Io {
        path: args.input.clone(),
        source,
    })?;
    let first = text.lines().next().unwrap_or("");
    let is_trajectory = serde_json::from_str::<serde_json::Value>(first)
        .ok()
        .and_then(|v| v.get("kind").and_then(|k| k.as_str()).map(|k| k == "header"))
        .unwrap_or(false);
    if is_trajectory {
        let Trajectory { scenario, result, .. } = trajectory::parse_jsonl(text.as_bytes())?;
        return Ok((scenario, result));
    }
    let cfg = load_with(&args.input, &args.overrides)?;
    let res = run(&cfg).map_err(|source| CliError::Simulation {
        path: args.input.clone(),
        source,
    })?;
    Ok((cfg, res))
}

/// One SVG per requested sample, all sharing the first sample's viewport.
pub fn cmd_render(args: &RenderArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let (cfg, res) = load_run(args)?;
    let n = res.samples.len();
    let frames = if args.frames.is_empty() {
        let mut f = vec![0];
        if n > 1 {
            f.push(n - 1);
        }
        f
    } else {
        args.frames.clone()
    };
    if let Some(&bad) = frames.iter().find(|&&k| k >= n) {
        return Err(CliError::Usage(format!("frame {bad} out of range: run has {n} samples")));
    }
    fs::create_dir_all(&args.out).map_err(|source| CliError::Output {
        path: args.out.clone(),
        source,
    })?;
    let state_at = |k: usize| -> Result<GameState, CliError> {
        let s = &res.samples[k];
        let evader = AgentConfig::new(s.evader, cfg.evader.speed);
        let ps = s
            .pursuers
            .iter()
            .zip(&cfg.pursuers)
            .map(|(&p, c)| AgentConfig::new(p, c.speed))
            .collect();
        Ok(GameState::new(s.time, evader, ps)?)
    };
    let view = Viewport::fit(&state_at(0)?);
    let title = cfg.note.as_deref().unwrap_or("");
    for k in frames {
        let path = args.out.join(format!("frame_{k:05}.svg"));
        write_file(&path, &render_svg(&state_at(k)?, &view, title))?;
        let _ = writeln!(stdout, "{}", path.display());
    }
    Ok(true)
}

/// Parses `args`, dispatches, reports errors and returns the exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let rec = json!({ "error": "UsageError", "message": e.to_string().trim() });
            let _ = writeln!(stderr, "{rec}");
            return 2;
        }
    };
    let outcome = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a, stdout),
        Command::Area(a) => cmd_area(a, stdout),
        Command::Gradcheck(a) => cmd_gradcheck(a, stdout),
        Command::Render(a) => cmd_render(a, stdout),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => {
            let rec = json!({ "error": "CheckFailed", "message": "declared check did not hold" });
            let _ = writeln!(stderr, "{rec}");
            1
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}
