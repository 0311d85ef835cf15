//! Equilibrium heading laws.
//!
//! The area rate is `Σ_i V_i F_{p_i}·u_i + V_e F_e·v` and every control
//! appears in its own term, so each pursuer heads along `−F_{p_i}` and the
//! evader along `+F_e`. An agent whose gradient vanishes holds position.

use serde::{Deserialize, Serialize};

use crate::geometry::{AgentConfig, Vec2};
use crate::gradients::AreaGradients;

/// Degenerate-gradient threshold relative to the configuration length
/// scale.
pub const HEADING_EPS_REL: f64 = 1e-12;

/// A unit heading, or the zero vector for an agent standing still.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HeadingCommand(Vec2);

impl HeadingCommand {
    pub const HOLD: HeadingCommand = HeadingCommand(Vec2::ZERO);

    /// Normalizes `v`, or holds if `‖v‖ ≤ eps`.
    pub fn toward(v: Vec2, eps: f64) -> Self {
        let n = v.norm();
        if n > eps && n.is_finite() {
            HeadingCommand(v / n)
        } else {
            Self::HOLD
        }
    }

    #[inline]
    pub fn direction(&self) -> Vec2 {
        self.0
    }

    pub fn is_hold(&self) -> bool {
        self.0 == Vec2::ZERO
    }
}

/// `−F_{p_i}/‖F_{p_i}‖`, or hold for a pursuer without a boundary arc.
pub fn pursuer_heading(i: usize, gradients: &AreaGradients, eps: f64) -> HeadingCommand {
    HeadingCommand::toward(-gradients.per_pursuer[i], eps)
}

/// `F_e/‖F_e‖`, or hold when the gradient vanishes (e.g. a symmetric
/// encirclement).
pub fn evader_heading(gradients: &AreaGradients, eps: f64) -> HeadingCommand {
    HeadingCommand::toward(gradients.evader, eps)
}

/// Headings of all agents for one instant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Headings {
    pub pursuers: Vec<HeadingCommand>,
    pub evader: HeadingCommand,
}

impl Headings {
    /// Equilibrium headings with the threshold `HEADING_EPS_REL · scale`.
    pub fn equilibrium(gradients: &AreaGradients, scale: f64) -> Self {
        let eps = HEADING_EPS_REL * scale;
        Self {
            pursuers: (0..gradients.per_pursuer.len())
                .map(|i| pursuer_heading(i, gradients, eps))
                .collect(),
            evader: evader_heading(gradients, eps),
        }
    }
}

/// Area rate `Σ_i V_i F_{p_i}·u_i + V_e F_e·v` for arbitrary controls.
pub fn area_rate(
    evader: &AgentConfig,
    pursuers: &[AgentConfig],
    gradients: &AreaGradients,
    headings: &Headings,
) -> f64 {
    let pursuit: f64 = pursuers
        .iter()
        .zip(&gradients.per_pursuer)
        .zip(&headings.pursuers)
        .map(|((p, g), u)| p.speed * g.dot(u.direction()))
        .sum();
    pursuit + evader.speed * gradients.evader.dot(headings.evader.direction())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradients::{area_gradients, optimal_area_rate};
    use crate::safeset::boundary;

    fn agent(x: f64, y: f64, v: f64) -> AgentConfig {
        AgentConfig::new(Vec2::new(x, y), v)
    }

    #[test]
    fn one_on_one_is_pure_pursuit_and_flight() {
        let e = agent(1.0, -2.0, 1.0);
        let ps = [agent(7.0, 6.0, 3.0)];
        let b = boundary(&e, &ps).unwrap();
        let g = area_gradients(&e, &ps, &b);
        let h = Headings::equilibrium(&g, b.scale);
        let los = (e.position - ps[0].position).normalized().unwrap();
        assert!((h.pursuers[0].direction() - los).norm() < 1e-12);
        assert!((h.evader.direction() - los).norm() < 1e-12);
    }

    #[test]
    fn symmetric_pair_evader_holds() {
        let e = agent(0.0, 0.0, 1.0);
        let ps = [agent(10.0, 0.0, 2.0), agent(-10.0, 0.0, 2.0)];
        let b = boundary(&e, &ps).unwrap();
        let g = area_gradients(&e, &ps, &b);
        let h = Headings::equilibrium(&g, b.scale);
        assert!(h.evader.is_hold());
        assert!((h.pursuers[0].direction() - Vec2::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((h.pursuers[1].direction() - Vec2::new(1.0, 0.0)).norm() < 1e-12);
        let rate = area_rate(&e, &ps, &g, &h);
        assert!(rate < 0.0);
        assert!((rate - optimal_area_rate(&e, &ps, &g)).abs() < 1e-12 * rate.abs());
    }

    #[test]
    fn zero_gradient_holds() {
        let g = AreaGradients::zeros(2);
        let h = Headings::equilibrium(&g, 10.0);
        assert!(h.pursuers.iter().all(HeadingCommand::is_hold));
        assert!(h.evader.is_hold());
    }

    #[test]
    fn headings_ignore_gradient_scaling() {
        let g = AreaGradients {
            per_pursuer: vec![Vec2::new(3.0, -4.0), Vec2::new(0.1, 0.2)],
            evader: Vec2::new(-1.0, 2.0),
        };
        let scaled = AreaGradients {
            per_pursuer: g.per_pursuer.iter().map(|v| *v * 1e3).collect(),
            evader: g.evader * 1e3,
        };
        assert_eq!(Headings::equilibrium(&g, 1.0).pursuers[0], HeadingCommand::toward(Vec2::new(-3.0, 4.0), 0.0));
        let (a, b) = (Headings::equilibrium(&g, 1.0), Headings::equilibrium(&scaled, 1.0));
        for (x, y) in a.pursuers.iter().zip(&b.pursuers) {
            assert!((x.direction() - y.direction()).norm() < 1e-15);
        }
        assert!((a.evader.direction() - b.evader.direction()).norm() < 1e-15);
    }
}
