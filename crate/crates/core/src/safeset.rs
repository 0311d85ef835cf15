//! The evader's safe-reachable set: the intersection of all Apollonius
//! discs, its boundary arcs and its area.
//!
//! The boundary is built from scratch for each configuration:
//!
//! 1. discs that wholly contain another disc are discarded ([`active_set`]);
//! 2. for every remaining disc `i` and every other active disc `j`, the
//!    angles on circle `i` that lie inside disc `j` form one closed arc
//!    ([`pairwise_constraint_interval`]);
//! 3. the part of circle `i` on the boundary is the intersection of those
//!    arcs ([`arc_components`]); usually one interval or empty, but a small
//!    circle trimmed from two sides keeps two pieces;
//! 4. the surviving arcs are ordered counterclockwise around the evader
//!    and the area follows from Green's theorem ([`area`]).

use std::f64::consts::TAU;

use crate::error::GeometryError;
use crate::geometry::{apollonius_disc, length_scale, AgentConfig, ApolloniusDisc, Vec2};
use crate::interval::ArcInterval;

/// Arcs narrower than this (radians) carry no area and are dropped.
pub const ARC_DROP_WIDTH: f64 = 1e-12;

/// Centers closer than this (relative to the configuration scale) are
/// treated as coincident.
pub const COINCIDENT_REL: f64 = 1e-12;

/// Intersection components narrower than this (radians) are rounding
/// debris.
pub const COMPONENT_TOL: f64 = 1e-9;

/// Evader-pursuer distances at or below this fraction of the
/// configuration scale make the geometry degenerate.
pub const DEGENERATE_REL: f64 = 1e-12;

/// Relative tolerance used when the constructor checks arc closure.
const CLOSURE_CHECK_REL: f64 = 1e-6;

/// Arc `[theta_min, theta_max]` of circle `disc_index` that lies on the
/// boundary. `theta_min` is in `[0, 2π)` and `theta_max > theta_min`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryArc {
    pub disc_index: usize,
    pub theta_min: f64,
    pub theta_max: f64,
}

impl BoundaryArc {
    #[inline]
    pub fn delta_theta(&self) -> f64 {
        self.theta_max - self.theta_min
    }

    #[inline]
    pub fn mid_angle(&self) -> f64 {
        0.5 * (self.theta_min + self.theta_max)
    }

    pub fn is_full_circle(&self) -> bool {
        self.delta_theta() >= TAU
    }

    pub fn start_point(&self, disc: &ApolloniusDisc) -> Vec2 {
        disc.point_at(self.theta_min)
    }

    pub fn end_point(&self, disc: &ApolloniusDisc) -> Vec2 {
        disc.point_at(self.theta_max)
    }
}

/// Ordered boundary of the safe-reachable set.
#[derive(Clone, Debug, PartialEq)]
pub struct SafeSetBoundary {
    /// Counterclockwise around `reference`.
    pub arcs: Vec<BoundaryArc>,
    /// One disc per pursuer, indexed like the pursuer list.
    pub discs: Vec<ApolloniusDisc>,
    /// Indices of discs that do not contain another disc.
    pub active: Vec<usize>,
    /// Interior point the arcs are ordered around (the evader).
    pub reference: Vec2,
    /// `max_i ‖e − p_i‖`.
    pub scale: f64,
    pub area: f64,
}

impl SafeSetBoundary {
    pub fn disc_of(&self, arc: &BoundaryArc) -> &ApolloniusDisc {
        &self.discs[arc.disc_index]
    }

    /// The first boundary arc contributed by pursuer `i`, if any.
    pub fn arc_for(&self, i: usize) -> Option<&BoundaryArc> {
        self.arcs.iter().find(|a| a.disc_index == i)
    }

    /// Every boundary arc contributed by pursuer `i` (usually zero or one).
    pub fn arcs_for(&self, i: usize) -> impl Iterator<Item = &BoundaryArc> + '_ {
        self.arcs.iter().filter(move |a| a.disc_index == i)
    }

    /// Whether `q` lies in every disc.
    pub fn contains(&self, q: Vec2) -> bool {
        self.discs.iter().all(|d| d.contains(q))
    }

    /// Largest gap between the end of one arc and the start of the next.
    pub fn closure_error(&self) -> f64 {
        let n = self.arcs.len();
        (0..n)
            .map(|k| {
                let a = &self.arcs[k];
                let b = &self.arcs[(k + 1) % n];
                a.end_point(self.disc_of(a)).distance(b.start_point(self.disc_of(b)))
            })
            .fold(0.0, f64::max)
    }

    /// Norm of the sum of chord vectors; zero for a closed boundary.
    pub fn chord_closure_error(&self) -> f64 {
        self.arcs
            .iter()
            .map(|a| {
                let d = self.disc_of(a);
                a.end_point(d) - a.start_point(d)
            })
            .sum::<Vec2>()
            .norm()
    }
}

/// Scale `max ‖e − p_i‖` recovered from the discs alone
/// (`‖e − p‖ = r(1 − α²)/α`).
fn disc_scale(discs: &[ApolloniusDisc]) -> f64 {
    discs
        .iter()
        .map(|d| d.radius * (1.0 - d.alpha * d.alpha) / d.alpha)
        .fold(0.0, f64::max)
}

/// Indices of discs that do not wholly contain another disc, i.e.
/// `‖c_i − c_j‖ + r_j ≥ r_i` for every `j ≠ i`.
///
/// For (near-)coincident centers the smaller disc wins; exactly equal
/// discs are all kept.
pub fn active_set(discs: &[ApolloniusDisc]) -> Vec<usize> {
    let tol = COINCIDENT_REL * disc_scale(discs);
    (0..discs.len())
        .filter(|&i| {
            let di = &discs[i];
            discs.iter().enumerate().all(|(j, dj)| {
                if j == i {
                    return true;
                }
                let d = di.center.distance(dj.center);
                if d <= tol {
                    di.radius <= dj.radius
                } else {
                    d + dj.radius >= di.radius
                }
            })
        })
        .collect()
}

/// Angles on circle `i` that lie inside disc `j`:
/// `[φ − a, φ + a]` with `φ` the direction from `c_i` to `c_j` and
/// `cos a = (d² + r_i² − r_j²)/(2 r_i d)`.
///
/// Identical discs are resolved by pursuer index: the lower index keeps
/// the full circle, the higher one gets nothing.
pub fn pairwise_constraint_interval(
    disc_i: &ApolloniusDisc,
    disc_j: &ApolloniusDisc,
) -> Result<ArcInterval, GeometryError> {
    let (ri, rj) = (disc_i.radius, disc_j.radius);
    let delta = disc_j.center - disc_i.center;
    let d = delta.norm();

    if d <= COINCIDENT_REL * ri.max(rj) {
        return Ok(if ri < rj || (ri == rj && disc_i.pursuer_index < disc_j.pursuer_index) {
            ArcInterval::FULL
        } else {
            ArcInterval::EMPTY
        });
    }
    if d + ri <= rj {
        return Ok(ArcInterval::FULL);
    }
    if d >= ri + rj {
        return Err(GeometryError::EmptyOverlap {
            i: disc_i.pursuer_index,
            j: disc_j.pursuer_index,
            distance: d,
            radius_sum: ri + rj,
        });
    }

    let cos_a = (d * d + ri * ri - rj * rj) / (2.0 * ri * d);
    if cos_a > 1.0 {
        // tangent from inside, or circle i wraps around disc j
        return Ok(ArcInterval::EMPTY);
    }
    if cos_a < -1.0 {
        return Ok(ArcInterval::FULL);
    }
    let half = cos_a.acos();
    Ok(ArcInterval::centered(delta.angle(), half))
}

/// Connected pieces of circle `i` that lie inside every other active disc,
/// in increasing order of start angle.
///
/// Components no wider than [`COMPONENT_TOL`] are rounding debris and are
/// discarded, unless nothing wider exists, in which case the widest is
/// returned alone.
pub fn arc_components(
    i: usize,
    discs: &[ApolloniusDisc],
    active: &[usize],
) -> Result<Vec<ArcInterval>, GeometryError> {
    let constraints = active
        .iter()
        .filter(|&&j| j != i)
        .map(|&j| pairwise_constraint_interval(&discs[i], &discs[j]))
        .collect::<Result<Vec<_>, _>>()?;
    let comps = ArcInterval::intersect_all(constraints);
    let significant: Vec<ArcInterval> = comps.iter().copied().filter(|c| c.width() > COMPONENT_TOL).collect();
    if significant.is_empty() {
        Ok(comps
            .into_iter()
            .max_by(|a, b| a.width().total_cmp(&b.width()))
            .into_iter()
            .collect())
    } else {
        Ok(significant)
    }
}

/// Angular range of circle `i` that belongs to the boundary, as a single
/// interval: the intersection of its pairwise constraint intervals with
/// every other active disc.
///
/// Fails with [`GeometryError::AssertionFailure`] when the intersection has
/// more than one component. That happens for real configurations (a
/// small circle with caps cut off on two sides by larger discs), so
/// [`boundary`] works from [`arc_components`] instead.
pub fn arc_range(
    i: usize,
    discs: &[ApolloniusDisc],
    active: &[usize],
) -> Result<ArcInterval, GeometryError> {
    let comps = arc_components(i, discs, active)?;
    match comps.len() {
        0 => Ok(ArcInterval::EMPTY),
        1 => Ok(comps[0]),
        n => Err(GeometryError::AssertionFailure(format!(
            "arc of disc {i} splits into {n} components: {:?}",
            comps.iter().map(|c| (c.start(), c.width())).collect::<Vec<_>>()
        ))),
    }
}

/// Builds the boundary of the safe-reachable set for the given agents.
pub fn boundary(evader: &AgentConfig, pursuers: &[AgentConfig]) -> Result<SafeSetBoundary, GeometryError> {
    if pursuers.is_empty() {
        return Err(GeometryError::NoPursuers);
    }
    let e = evader.position;
    let discs = pursuers
        .iter()
        .enumerate()
        .map(|(i, p)| apollonius_disc(evader, p, i))
        .collect::<Result<Vec<_>, _>>()?;

    let scale = length_scale(e, pursuers);
    for (i, p) in pursuers.iter().enumerate() {
        let dist = p.position.distance(e);
        if dist <= DEGENERATE_REL * scale {
            return Err(GeometryError::CaptureDegenerate {
                pursuer_index: i,
                distance: dist,
            });
        }
    }

    let active = active_set(&discs);
    let mut arcs = Vec::with_capacity(active.len());
    for &i in &active {
        for range in arc_components(i, &discs, &active)? {
            if range.width() > ARC_DROP_WIDTH {
                arcs.push(BoundaryArc {
                    disc_index: i,
                    theta_min: range.start(),
                    theta_max: range.end(),
                });
            }
        }
    }
    if arcs.is_empty() {
        return Err(GeometryError::AssertionFailure("no disc contributes a boundary arc".into()));
    }

    let sort_key = |a: &BoundaryArc| (discs[a.disc_index].point_at(a.mid_angle()) - e).angle();
    arcs.sort_by(|a, b| sort_key(a).total_cmp(&sort_key(b)));

    let mut b = SafeSetBoundary {
        arcs,
        discs,
        active,
        reference: e,
        scale,
        area: 0.0,
    };
    let gap = b.closure_error();
    if gap > CLOSURE_CHECK_REL * scale {
        return Err(GeometryError::AssertionFailure(format!(
            "boundary arcs do not close (gap {gap:e}, scale {scale})"
        )));
    }
    b.area = area(&b)?;
    Ok(b)
}

/// Green's theorem `½∮(x dy − y dx)` over the arcs, in closed form per
/// arc, with coordinates taken relative to the interior reference point.
///
/// A negative result means the arcs are not counterclockwise and is an
/// error.
pub fn area(boundary: &SafeSetBoundary) -> Result<f64, GeometryError> {
    let mut twice = 0.0;
    for arc in &boundary.arcs {
        let disc = boundary.disc_of(arc);
        let c = disc.center - boundary.reference;
        let r = disc.radius;
        let (sa, ca) = arc.theta_min.sin_cos();
        let (sb, cb) = arc.theta_max.sin_cos();
        twice += r * r * arc.delta_theta() + r * (c.x * (sb - sa) - c.y * (cb - ca));
    }
    let a = 0.5 * twice;
    if a < 0.0 {
        return Err(GeometryError::AssertionFailure(format!(
            "negative boundary area {a:e}: arcs are not counterclockwise"
        )));
    }
    Ok(a)
}

/// Area of the safe-reachable set for the given agents.
pub fn safe_area(evader: &AgentConfig, pursuers: &[AgentConfig]) -> Result<f64, GeometryError> {
    boundary(evader, pursuers).map(|b| b.area)
}
