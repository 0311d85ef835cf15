//! Trajectory files: JSON Lines with a header echoing the resolved
//! scenario, one record per recorded sample, and a closing summary.

use std::fs;
use std::io::{self, BufRead};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::scenario::ScenarioConfig;
use crate::simulator::{Sample, SimulationResult, Termination, TimedEvent};

pub const FORMAT: &str = "pursuit-trajectory";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Header {
        format: String,
        version: String,
        scenario: ScenarioConfig,
    },
    Sample(Sample),
    Summary {
        termination: Termination,
        capture_time: Option<f64>,
        final_area: f64,
        steps: u64,
        events: Vec<TimedEvent>,
    },
}

/// A trajectory file in memory.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub version: String,
    pub scenario: ScenarioConfig,
    pub result: SimulationResult,
}

pub fn to_jsonl(scenario: &ScenarioConfig, result: &SimulationResult) -> String {
    let mut out = String::new();
    let mut push = |r: &Record| {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    };
    push(&Record::Header {
        format: FORMAT.to_string(),
        version: crate::VERSION.to_string(),
        scenario: scenario.clone(),
    });
    for s in &result.samples {
        push(&Record::Sample(s.clone()));
    }
    push(&Record::Summary {
        termination: result.termination,
        capture_time: result.capture_time,
        final_area: result.final_area,
        steps: result.steps,
        events: result.events.clone(),
    });
    out
}

#[derive(Debug, thiserror::Error)]
pub enum TrajectoryError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("{0}")]
    Structure(String),
}

pub fn parse_jsonl(reader: impl BufRead) -> Result<Trajectory, TrajectoryError> {
    let mut header = None;
    let mut samples = Vec::new();
    let mut summary = None;
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|source| TrajectoryError::Json { line: k + 1, source })?;
        match rec {
            Record::Header { format, version, scenario } => {
                if format != FORMAT {
                    return Err(TrajectoryError::Structure(format!("unknown format {format:?}")));
                }
                header = Some((version, scenario));
            }
            Record::Sample(s) => samples.push(s),
            Record::Summary { termination, capture_time, final_area, steps, events } => {
                summary = Some((termination, capture_time, final_area, steps, events));
            }
        }
    }
    let (version, scenario) = header.ok_or_else(|| TrajectoryError::Structure("missing header".into()))?;
    let (termination, capture_time, final_area, steps, events) =
        summary.ok_or_else(|| TrajectoryError::Structure("missing summary".into()))?;
    Ok(Trajectory {
        version,
        scenario,
        result: SimulationResult {
            samples,
            events,
            termination,
            capture_time,
            final_area,
            steps,
        },
    })
}

pub fn read_trajectory(path: impl AsRef<Path>) -> Result<Trajectory, TrajectoryError> {
    let f = fs::File::open(path)?;
    parse_jsonl(io::BufReader::new(f))
}

pub fn write_trajectory(
    path: impl AsRef<Path>,
    scenario: &ScenarioConfig,
    result: &SimulationResult,
) -> io::Result<()> {
    fs::write(path, to_jsonl(scenario, result))
}
