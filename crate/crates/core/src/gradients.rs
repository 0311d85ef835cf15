//! Closed-form gradients of the safe-set area with respect to every agent
//! position.
//!
//! Moving an agent moves the circles it defines. The rate of change of the
//! area is the boundary integral of the outward normal velocity, which on
//! the arc of circle `i` equals `−∂F_i/∂z / ‖∇_q F_i‖` for the level-set
//! function `F_i(q) = ‖q − c_i‖² − r_i²`. Integrating over each arc reduces
//! to the arc centroid:
//!
//! ```text
//! ∇_{p_i} A = −α_i² Δθ_i / (1 − α_i²) · (C_i − p_i)
//! ∇_e     A = Σ_i Δθ_i / (1 − α_i²) · (C_i − e)
//! ```
//!
//! where `C_i` is the centroid of pursuer `i`'s boundary arc and `Δθ_i` its
//! angular width.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::geometry::{AgentConfig, ApolloniusDisc, Vec2};
use crate::safeset::{BoundaryArc, SafeSetBoundary};

/// Derived quantities of one boundary arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcGeometry {
    pub disc_index: usize,
    pub delta_theta: f64,
    /// `L = r Δθ`.
    pub arc_length: f64,
    /// `ℓ = 2 r sin(Δθ/2)`; zero for the full circle.
    pub chord_length: f64,
    pub mid_angle: f64,
    pub mid_unit: Vec2,
    /// `c + r (ℓ/L) (cos m, sin m)`.
    pub centroid: Vec2,
}

pub fn arc_geometry(disc: &ApolloniusDisc, arc: &BoundaryArc) -> ArcGeometry {
    let dt = arc.delta_theta();
    let r = disc.radius;
    let mid = arc.mid_angle();
    let mid_unit = Vec2::from_angle(mid);
    let (chord, centroid) = if dt >= TAU {
        (0.0, disc.center)
    } else {
        let chord = 2.0 * r * (0.5 * dt).sin();
        // r·ℓ/L simplifies to ℓ/Δθ
        (chord, disc.center + mid_unit * (chord / dt))
    };
    ArcGeometry {
        disc_index: arc.disc_index,
        delta_theta: dt,
        arc_length: r * dt,
        chord_length: chord,
        mid_angle: mid,
        mid_unit,
        centroid,
    }
}

/// Gradients of `F_i(q) = ‖q − c_i‖² − r_i²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelSetGradients {
    pub grad_q: Vec2,
    pub grad_p: Vec2,
    pub grad_e: Vec2,
}

/// `∇_q F = 2(q − c)`, `∇_p F = 2α²/(1−α²)(q − p)`,
/// `∇_e F = 2/(1−α²)(e − q)`. The gradient with respect to any other
/// pursuer is zero.
pub fn levelset_gradients(
    disc: &ApolloniusDisc,
    evader: &AgentConfig,
    pursuer: &AgentConfig,
    q: Vec2,
) -> LevelSetGradients {
    let a2 = disc.alpha * disc.alpha;
    let k = 1.0 - a2;
    LevelSetGradients {
        grad_q: (q - disc.center) * 2.0,
        grad_p: (q - pursuer.position) * (2.0 * a2 / k),
        grad_e: (evader.position - q) * (2.0 / k),
    }
}

/// Area gradients for every agent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaGradients {
    pub per_pursuer: Vec<Vec2>,
    pub evader: Vec2,
}

impl AreaGradients {
    /// `Σ_i F_{p_i} + F_e`, zero up to rounding.
    pub fn translation_residual(&self) -> Vec2 {
        self.per_pursuer.iter().copied().sum::<Vec2>() + self.evader
    }

    /// Largest gradient norm over all agents.
    pub fn magnitude(&self) -> f64 {
        self.per_pursuer
            .iter()
            .map(|g| g.norm())
            .fold(self.evader.norm(), f64::max)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            per_pursuer: vec![Vec2::ZERO; n],
            evader: Vec2::ZERO,
        }
    }
}

/// Which prefactor to attach to the centroid vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PrefactorForm {
    /// `−α²Δθ/(1−α²)` and `Δθ/(1−α²)`: the exact derivative.
    #[default]
    Integral,
    /// `−(1−α²) r L` and `(1−α²)/α² · r L`. Same directions for the
    /// pursuers, but off by `‖e − p_i‖²` in magnitude; only kept so the
    /// two can be compared.
    Statement,
}

fn pursuer_weight(form: PrefactorForm, disc: &ApolloniusDisc, g: &ArcGeometry) -> f64 {
    let a2 = disc.alpha * disc.alpha;
    match form {
        PrefactorForm::Integral => -a2 * g.delta_theta / (1.0 - a2),
        PrefactorForm::Statement => -(1.0 - a2) * disc.radius * g.arc_length,
    }
}

fn evader_weight(form: PrefactorForm, disc: &ApolloniusDisc, g: &ArcGeometry) -> f64 {
    let a2 = disc.alpha * disc.alpha;
    match form {
        PrefactorForm::Integral => g.delta_theta / (1.0 - a2),
        PrefactorForm::Statement => (1.0 - a2) / a2 * disc.radius * g.arc_length,
    }
}

/// `∇_{p_i} A`; zero when pursuer `i` contributes no arc. A circle with
/// several boundary arcs sums their contributions.
pub fn grad_pursuer(i: usize, pursuers: &[AgentConfig], boundary: &SafeSetBoundary) -> Vec2 {
    grad_pursuer_with(PrefactorForm::Integral, i, pursuers, boundary)
}

pub fn grad_pursuer_with(
    form: PrefactorForm,
    i: usize,
    pursuers: &[AgentConfig],
    boundary: &SafeSetBoundary,
) -> Vec2 {
    boundary
        .arcs_for(i)
        .map(|arc| {
            let disc = boundary.disc_of(arc);
            let g = arc_geometry(disc, arc);
            (g.centroid - pursuers[i].position) * pursuer_weight(form, disc, &g)
        })
        .sum()
}

/// `∇_e A`: every boundary arc pulls toward its centroid.
pub fn grad_evader(evader: &AgentConfig, boundary: &SafeSetBoundary) -> Vec2 {
    grad_evader_with(PrefactorForm::Integral, evader, boundary)
}

pub fn grad_evader_with(form: PrefactorForm, evader: &AgentConfig, boundary: &SafeSetBoundary) -> Vec2 {
    boundary
        .arcs
        .iter()
        .map(|arc| {
            let disc = boundary.disc_of(arc);
            let g = arc_geometry(disc, arc);
            (g.centroid - evader.position) * evader_weight(form, disc, &g)
        })
        .sum()
}

pub fn area_gradients(evader: &AgentConfig, pursuers: &[AgentConfig], boundary: &SafeSetBoundary) -> AreaGradients {
    area_gradients_with(PrefactorForm::Integral, evader, pursuers, boundary)
}

pub fn area_gradients_with(
    form: PrefactorForm,
    evader: &AgentConfig,
    pursuers: &[AgentConfig],
    boundary: &SafeSetBoundary,
) -> AreaGradients {
    AreaGradients {
        per_pursuer: (0..pursuers.len())
            .map(|i| grad_pursuer_with(form, i, pursuers, boundary))
            .collect(),
        evader: grad_evader_with(form, evader, boundary),
    }
}

/// Area rate when every agent plays its best response:
/// `V_e ‖F_e‖ − Σ_i V_i ‖F_{p_i}‖`.
pub fn optimal_area_rate(evader: &AgentConfig, pursuers: &[AgentConfig], gradients: &AreaGradients) -> f64 {
    evader.speed * gradients.evader.norm()
        - pursuers
            .iter()
            .zip(&gradients.per_pursuer)
            .map(|(p, g)| p.speed * g.norm())
            .sum::<f64>()
}
