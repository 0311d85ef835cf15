//! Planar vectors, agents and the Apollonius disc of a single
//! pursuer-evader pair.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// A point or displacement in the plane.
///
/// Serialized as a two-element array `[x, y]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `theta` (radians, counterclockwise from +x).
    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    /// Angle of the vector in `(-π, π]`.
    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counterclockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    /// Rotates counterclockwise by `theta` radians.
    pub fn rotate(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Returns `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl std::iter::Sum for Vec2 {
    fn sum<I: Iterator<Item = Vec2>>(iter: I) -> Vec2 {
        iter.fold(Vec2::ZERO, Add::add)
    }
}

/// Position and maximum speed of one agent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub position: Vec2,
    pub speed: f64,
}

impl AgentConfig {
    pub const fn new(position: Vec2, speed: f64) -> Self {
        Self { position, speed }
    }

    pub(crate) fn check(&self, role: &str) -> Result<(), GeometryError> {
        if !self.position.is_finite() {
            return Err(GeometryError::NonFinite(format!("{role} position {}", self.position)));
        }
        if !(self.speed.is_finite() && self.speed > 0.0) {
            return Err(GeometryError::NonPositiveSpeed {
                role: role.to_string(),
                speed: self.speed,
            });
        }
        Ok(())
    }
}

/// The set of points the evader reaches strictly before pursuer
/// `pursuer_index`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApolloniusDisc {
    pub center: Vec2,
    pub radius: f64,
    /// Speed ratio `V_e / V_i`, in `(0, 1)`.
    pub alpha: f64,
    pub pursuer_index: usize,
}

impl ApolloniusDisc {
    /// Point on the boundary circle at angle `theta` about the center.
    #[inline]
    pub fn point_at(&self, theta: f64) -> Vec2 {
        self.center + Vec2::from_angle(theta) * self.radius
    }

    #[inline]
    pub fn contains(&self, q: Vec2) -> bool {
        (q - self.center).norm_squared() <= self.radius * self.radius
    }

    /// Level-set value `‖q − c‖² − r²`; non-positive inside the disc.
    #[inline]
    pub fn level(&self, q: Vec2) -> f64 {
        (q - self.center).norm_squared() - self.radius * self.radius
    }
}

/// Speed ratio `V_e / V_i`, validating `V_i > V_e`.
pub fn speed_ratio(
    evader: &AgentConfig,
    pursuer: &AgentConfig,
    pursuer_index: usize,
) -> Result<f64, GeometryError> {
    evader.check("evader")?;
    pursuer.check(&format!("pursuer {pursuer_index}"))?;
    if pursuer.speed <= evader.speed {
        return Err(GeometryError::SpeedOrderViolation {
            pursuer_index,
            pursuer_speed: pursuer.speed,
            evader_speed: evader.speed,
        });
    }
    Ok(evader.speed / pursuer.speed)
}

/// Builds the Apollonius disc of one pursuer-evader pair:
/// `c = (e − α²p)/(1 − α²)`, `r = α‖e − p‖/(1 − α²)`.
///
/// Coincident agents give a radius-0 disc centered on them.
pub fn apollonius_disc(
    evader: &AgentConfig,
    pursuer: &AgentConfig,
    pursuer_index: usize,
) -> Result<ApolloniusDisc, GeometryError> {
    let alpha = speed_ratio(evader, pursuer, pursuer_index)?;
    Ok(disc_from_ratio(evader.position, pursuer.position, alpha, pursuer_index))
}

pub(crate) fn disc_from_ratio(e: Vec2, p: Vec2, alpha: f64, pursuer_index: usize) -> ApolloniusDisc {
    let a2 = alpha * alpha;
    let k = 1.0 - a2;
    ApolloniusDisc {
        center: (e - p * a2) / k,
        radius: alpha * (e - p).norm() / k,
        alpha,
        pursuer_index,
    }
}

/// Center and radius from the speeds directly,
/// `c = V_i²/(V_i² − V_e²)·e + V_e²/(V_e² − V_i²)·p`,
/// `r = V_i V_e/|V_i² − V_e²|·‖e − p‖`.
///
/// Equivalent to [`apollonius_disc`]; kept as a second algebraic route.
pub fn apollonius_speed_form(evader: &AgentConfig, pursuer: &AgentConfig) -> (Vec2, f64) {
    let (ve, vi) = (evader.speed, pursuer.speed);
    let (ve2, vi2) = (ve * ve, vi * vi);
    let center = evader.position * (vi2 / (vi2 - ve2)) + pursuer.position * (ve2 / (ve2 - vi2));
    let radius = vi * ve / (vi2 - ve2).abs() * (evader.position - pursuer.position).norm();
    (center, radius)
}

/// `‖q − e‖/V_e − ‖q − p‖/V_i`: negative exactly where the evader
/// arrives strictly first.
pub fn time_advantage(q: Vec2, evader: &AgentConfig, pursuer: &AgentConfig) -> f64 {
    (q - evader.position).norm() / evader.speed - (q - pursuer.position).norm() / pursuer.speed
}

/// Configuration length scale `max_i ‖e − p_i‖`.
pub fn length_scale(evader: Vec2, pursuers: &[AgentConfig]) -> f64 {
    pursuers
        .iter()
        .map(|p| (p.position - evader).norm())
        .fold(0.0, f64::max)
}
