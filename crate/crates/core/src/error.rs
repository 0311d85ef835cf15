use std::path::PathBuf;

use thiserror::Error;

use crate::geometry::{AgentConfig, Vec2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("pursuer {pursuer_index} speed {pursuer_speed} does not exceed evader speed {evader_speed}")]
    SpeedOrderViolation {
        pursuer_index: usize,
        pursuer_speed: f64,
        evader_speed: f64,
    },

    #[error("{role} speed must be positive and finite, got {speed}")]
    NonPositiveSpeed { role: String, speed: f64 },

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("at least one pursuer is required")]
    NoPursuers,

    #[error("discs {i} and {j} do not overlap (d = {distance}, r_i + r_j = {radius_sum})")]
    EmptyOverlap {
        i: usize,
        j: usize,
        distance: f64,
        radius_sum: f64,
    },

    #[error("pursuer {pursuer_index} coincides with the evader (distance {distance})")]
    CaptureDegenerate { pursuer_index: usize, distance: f64 },

    #[error("geometry assertion failed: {0}")]
    AssertionFailure(String),
}

/// Positions at the moment a simulation step failed.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSnapshot {
    pub time: f64,
    pub dt: f64,
    pub evader: AgentConfig,
    pub pursuers: Vec<AgentConfig>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("{source} at t = {} (dt = {})", .snapshot.time, .snapshot.dt)]
    Geometry {
        source: GeometryError,
        snapshot: Box<StateSnapshot>,
    },

    #[error("invalid scenario: {}", format_field_errors(.0))]
    InvalidScenario(Vec<FieldError>),
}

/// One rejected field of a scenario, e.g. `pursuers[2].speed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

fn format_field_errors(errs: &[FieldError]) -> String {
    errs.iter()
        .map(|e| format!("{}: {}", e.field, e.message))
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("finite-difference probe {offset} on {agent} hit a degenerate configuration: {source}")]
    DegenerateProbe {
        agent: String,
        offset: Vec2,
        source: GeometryError,
    },

    #[error("invalid oracle argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed scenario: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid scenario: {}", format_field_errors(.0))]
    Validation(Vec<FieldError>),
}

impl ScenarioError {
    pub fn kind(&self) -> &'static str {
        match self {
            ScenarioError::Io { .. } => "IoError",
            ScenarioError::Parse(_) => "ParseError",
            ScenarioError::Validation(_) => "ValidationError",
        }
    }
}

impl GeometryError {
    pub fn kind(&self) -> &'static str {
        match self {
            GeometryError::SpeedOrderViolation { .. } => "SpeedOrderViolation",
            GeometryError::NonPositiveSpeed { .. } => "NonPositiveSpeed",
            GeometryError::NonFinite(_) => "NonFinite",
            GeometryError::NoPursuers => "NoPursuers",
            GeometryError::EmptyOverlap { .. } => "EmptyOverlap",
            GeometryError::CaptureDegenerate { .. } => "CaptureDegenerate",
            GeometryError::AssertionFailure(_) => "GeometryAssertionFailure",
        }
    }
}
