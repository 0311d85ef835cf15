//! Scenario files: initial agent states plus integration and termination
//! parameters, stored as JSON.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{FieldError, ScenarioError};
use crate::geometry::{length_scale, AgentConfig};

/// Default step: `DT_REL · scale / max speed`.
pub const DT_REL: f64 = 1e-3;
/// Default capture radius: `CAPTURE_REL · scale`.
pub const CAPTURE_REL: f64 = 1e-2;
/// Default area threshold: `AREA_REL · scale²`.
pub const AREA_REL: f64 = 1e-4;
/// Default time limit: `T_MAX_FACTOR · scale / min_i (V_i − V_e)`.
pub const T_MAX_FACTOR: f64 = 10.0;

/// A scenario as written by hand: everything except the agents is
/// optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub evader: AgentConfig,
    pub pursuers: Vec<AgentConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capture_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_stride: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A fully resolved, validated scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub evader: AgentConfig,
    pub pursuers: Vec<AgentConfig>,
    pub dt: f64,
    pub t_max: f64,
    pub capture_radius: f64,
    pub area_threshold: f64,
    pub sample_stride: u64,
    pub seed: u64,
}

impl ScenarioFile {
    pub fn new(evader: AgentConfig, pursuers: Vec<AgentConfig>) -> Self {
        Self {
            note: None,
            evader,
            pursuers,
            dt: None,
            t_max: None,
            capture_radius: None,
            area_threshold: None,
            sample_stride: None,
            seed: None,
        }
    }

    /// Fills in defaults and validates.
    pub fn resolve(self) -> Result<ScenarioConfig, ScenarioError> {
        let mut errs = agent_errors(&self.evader, &self.pursuers);
        if !errs.is_empty() {
            return Err(ScenarioError::Validation(errs));
        }
        let scale = length_scale(self.evader.position, &self.pursuers);
        let needs_scale = self.dt.is_none()
            || self.t_max.is_none()
            || self.capture_radius.is_none()
            || self.area_threshold.is_none();
        if needs_scale && scale <= 0.0 {
            errs.push(FieldError::new(
                "pursuers",
                "every pursuer starts on the evader; defaults need a nonzero length scale",
            ));
            return Err(ScenarioError::Validation(errs));
        }
        let max_speed = self.pursuers.iter().map(|p| p.speed).fold(0.0, f64::max);
        let min_gap = self
            .pursuers
            .iter()
            .map(|p| p.speed - self.evader.speed)
            .fold(f64::INFINITY, f64::min);
        let cfg = ScenarioConfig {
            note: self.note,
            evader: self.evader,
            dt: self.dt.unwrap_or(DT_REL * scale / max_speed),
            t_max: self.t_max.unwrap_or(T_MAX_FACTOR * scale / min_gap),
            capture_radius: self.capture_radius.unwrap_or(CAPTURE_REL * scale),
            area_threshold: self.area_threshold.unwrap_or(AREA_REL * scale * scale),
            sample_stride: self.sample_stride.unwrap_or(1),
            seed: self.seed.unwrap_or(0),
            pursuers: self.pursuers,
        };
        cfg.validate().map_err(ScenarioError::Validation)?;
        Ok(cfg)
    }
}

fn agent_errors(evader: &AgentConfig, pursuers: &[AgentConfig]) -> Vec<FieldError> {
    let mut errs = Vec::new();
    if !evader.position.is_finite() {
        errs.push(FieldError::new("evader.position", "must be finite"));
    }
    if !(evader.speed.is_finite() && evader.speed > 0.0) {
        errs.push(FieldError::new("evader.speed", format!("must be positive, got {}", evader.speed)));
    }
    if pursuers.is_empty() {
        errs.push(FieldError::new("pursuers", "at least one pursuer is required"));
    }
    for (i, p) in pursuers.iter().enumerate() {
        if !p.position.is_finite() {
            errs.push(FieldError::new(format!("pursuers[{i}].position"), "must be finite"));
        }
        if !(p.speed.is_finite() && p.speed > evader.speed) {
            errs.push(FieldError::new(
                format!("pursuers[{i}].speed"),
                format!(
                    "pursuer {i} speed {} must exceed the evader speed {}",
                    p.speed, evader.speed
                ),
            ));
        }
    }
    errs
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), Vec<FieldError>> {
        let mut errs = agent_errors(&self.evader, &self.pursuers);
        let positive = |name: &str, v: f64, errs: &mut Vec<FieldError>| {
            if !(v.is_finite() && v > 0.0) {
                errs.push(FieldError::new(name, format!("must be positive, got {v}")));
            }
        };
        positive("dt", self.dt, &mut errs);
        positive("capture_radius", self.capture_radius, &mut errs);
        positive("area_threshold", self.area_threshold, &mut errs);
        // zero is allowed: the run stops at the initial state
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            errs.push(FieldError::new("t_max", format!("must be non-negative, got {}", self.t_max)));
        }
        if self.sample_stride == 0 {
            errs.push(FieldError::new("sample_stride", "must be at least 1"));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    pub fn scale(&self) -> f64 {
        length_scale(self.evader.position, &self.pursuers)
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    serde_json::from_str::<ScenarioFile>(text)?.resolve()
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}

pub fn to_json(cfg: &ScenarioConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("scenario serializes")
}

pub fn save_scenario(cfg: &ScenarioConfig, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    let path = path.as_ref();
    fs::write(path, to_json(cfg) + "\n").map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })
}
