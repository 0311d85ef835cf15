//! Closed-loop simulation of the game under equilibrium feedback.
//!
//! Explicit Euler with a fixed step: every agent moves `dt·V` along the
//! heading computed from the shared pre-step state. Geometry is rebuilt
//! from scratch after each step.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::control::{area_rate, Headings};
use crate::error::{GeometryError, SimError, StateSnapshot};
use crate::geometry::{length_scale, AgentConfig, Vec2};
use crate::gradients::{area_gradients, optimal_area_rate, AreaGradients};
use crate::safeset::{boundary, SafeSetBoundary};
use crate::scenario::ScenarioConfig;

/// Complete game state at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct GameState {
    pub time: f64,
    pub evader: AgentConfig,
    pub pursuers: Vec<AgentConfig>,
    /// `None` once a pursuer sits exactly on the evader.
    pub boundary: Option<SafeSetBoundary>,
    pub area: f64,
    pub gradients: AreaGradients,
    pub active_indices: Vec<usize>,
}

impl GameState {
    pub fn new(time: f64, evader: AgentConfig, pursuers: Vec<AgentConfig>) -> Result<Self, GeometryError> {
        match boundary(&evader, &pursuers) {
            Ok(b) => {
                let gradients = area_gradients(&evader, &pursuers, &b);
                Ok(Self {
                    time,
                    evader,
                    area: b.area,
                    active_indices: b.active.clone(),
                    boundary: Some(b),
                    gradients,
                    pursuers,
                })
            }
            Err(GeometryError::CaptureDegenerate { .. }) => Ok(Self {
                time,
                evader,
                boundary: None,
                area: 0.0,
                gradients: AreaGradients::zeros(pursuers.len()),
                active_indices: Vec::new(),
                pursuers,
            }),
            Err(e) => Err(e),
        }
    }

    pub fn scale(&self) -> f64 {
        length_scale(self.evader.position, &self.pursuers)
    }

    pub fn headings(&self) -> Headings {
        Headings::equilibrium(&self.gradients, self.scale())
    }

    /// `V_e‖F_e‖ − Σ V_i‖F_{p_i}‖`.
    pub fn optimal_area_rate(&self) -> f64 {
        optimal_area_rate(&self.evader, &self.pursuers, &self.gradients)
    }

    pub fn min_distance(&self) -> f64 {
        self.pursuers
            .iter()
            .map(|p| p.position.distance(self.evader.position))
            .fold(f64::INFINITY, f64::min)
    }

    /// Pursuers contributing a boundary arc, in boundary order.
    pub fn arc_owners(&self) -> Vec<usize> {
        self.boundary
            .as_ref()
            .map(|b| b.arcs.iter().map(|a| a.disc_index).collect())
            .unwrap_or_default()
    }

    fn snapshot(&self, dt: f64) -> StateSnapshot {
        StateSnapshot {
            time: self.time,
            dt,
            evader: self.evader,
            pursuers: self.pursuers.clone(),
        }
    }
}

/// Advances every agent by one explicit Euler step along the equilibrium
/// headings of `state`.
pub fn step(state: &GameState, dt: f64) -> Result<GameState, SimError> {
    let h = state.headings();
    let mut evader = state.evader;
    evader.position += h.evader.direction() * (dt * evader.speed);
    let pursuers = state
        .pursuers
        .iter()
        .zip(&h.pursuers)
        .map(|(p, u)| AgentConfig::new(p.position + u.direction() * (dt * p.speed), p.speed))
        .collect();
    GameState::new(state.time + dt, evader, pursuers).map_err(|source| SimError::Geometry {
        source,
        snapshot: Box::new(state.snapshot(dt)),
    })
}

/// [`step`], retried once with `dt/2` if the geometry kernel rejects the
/// new configuration.
pub fn step_with_retry(state: &GameState, dt: f64) -> Result<GameState, SimError> {
    match step(state, dt) {
        Err(SimError::Geometry { .. }) => step(state, 0.5 * dt),
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event")]
pub enum SimEvent {
    ActiveSetChanged { entered: Vec<usize>, left: Vec<usize> },
    ArcCountChanged { from: usize, to: usize },
}

/// Changes in the active set and in the number of boundary arcs between
/// two consecutive states.
pub fn detect_events(prev: &GameState, cur: &GameState) -> Vec<SimEvent> {
    let mut out = Vec::new();
    let a: BTreeSet<usize> = prev.active_indices.iter().copied().collect();
    let b: BTreeSet<usize> = cur.active_indices.iter().copied().collect();
    if a != b {
        out.push(SimEvent::ActiveSetChanged {
            entered: b.difference(&a).copied().collect(),
            left: a.difference(&b).copied().collect(),
        });
    }
    let (na, nb) = (prev.arc_owners().len(), cur.arc_owners().len());
    if na != nb {
        out.push(SimEvent::ArcCountChanged { from: na, to: nb });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Captured,
    AreaBelowThreshold,
    TimeLimit,
}

/// One recorded instant of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub step: u64,
    pub time: f64,
    pub evader: Vec2,
    pub pursuers: Vec<Vec2>,
    pub area: f64,
    pub area_rate: f64,
    pub headings: Headings,
    pub active: Vec<usize>,
    pub arcs: Vec<usize>,
}

impl Sample {
    fn record(step: u64, s: &GameState) -> Self {
        let headings = s.headings();
        Self {
            step,
            time: s.time,
            evader: s.evader.position,
            pursuers: s.pursuers.iter().map(|p| p.position).collect(),
            area: s.area,
            area_rate: area_rate(&s.evader, &s.pursuers, &s.gradients, &headings),
            headings,
            active: s.active_indices.clone(),
            arcs: s.arc_owners(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimedEvent {
    pub step: u64,
    pub time: f64,
    #[serde(flatten)]
    pub event: SimEvent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub samples: Vec<Sample>,
    pub events: Vec<TimedEvent>,
    pub termination: Termination,
    pub capture_time: Option<f64>,
    pub final_area: f64,
    pub steps: u64,
}

fn termination(s: &GameState, sc: &ScenarioConfig) -> Option<Termination> {
    if s.min_distance() <= sc.capture_radius {
        Some(Termination::Captured)
    } else if s.area <= sc.area_threshold {
        Some(Termination::AreaBelowThreshold)
    } else if s.time >= sc.t_max - 1e-9 * sc.dt {
        Some(Termination::TimeLimit)
    } else {
        None
    }
}

/// Runs the game until capture, area collapse or the time limit, calling
/// `visit` on every state (recorded or not).
pub fn run_with<F>(sc: &ScenarioConfig, mut visit: F) -> Result<SimulationResult, SimError>
where
    F: FnMut(u64, &GameState),
{
    sc.validate().map_err(SimError::InvalidScenario)?;
    let stride = sc.sample_stride.max(1);
    let mut state = GameState::new(0.0, sc.evader, sc.pursuers.clone()).map_err(|source| SimError::Geometry {
        source,
        snapshot: Box::new(StateSnapshot {
            time: 0.0,
            dt: sc.dt,
            evader: sc.evader,
            pursuers: sc.pursuers.clone(),
        }),
    })?;
    let mut samples = Vec::new();
    let mut events = Vec::new();
    let mut k: u64 = 0;
    loop {
        visit(k, &state);
        if let Some(t) = termination(&state, sc) {
            samples.push(Sample::record(k, &state));
            let capture_time = (t != Termination::TimeLimit).then_some(state.time);
            return Ok(SimulationResult {
                samples,
                events,
                termination: t,
                capture_time,
                final_area: state.area,
                steps: k,
            });
        }
        if k.is_multiple_of(stride) {
            samples.push(Sample::record(k, &state));
        }
        let next = step_with_retry(&state, sc.dt)?;
        k += 1;
        events.extend(detect_events(&state, &next).into_iter().map(|event| TimedEvent {
            step: k,
            time: next.time,
            event,
        }));
        state = next;
    }
}

pub fn run(sc: &ScenarioConfig) -> Result<SimulationResult, SimError> {
    run_with(sc, |_, _| {})
}
