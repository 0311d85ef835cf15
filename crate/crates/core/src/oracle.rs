//! Brute-force checks that share nothing with the analytic path beyond
//! the disc construction: Monte Carlo area, central-difference gradients
//! and dense angular sampling of each circle.
//!
//! Random numbers come from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. Monte Carlo work is cut into chunks of
//! [`MC_CHUNK`] samples; chunk `k` reads stream `k` of the generator and maps
//! each pair of `u64` words `(a, b)` to the point
//! `(x0 + w·(a >> 11)·2⁻⁵³, y0 + h·(b >> 11)·2⁻⁵³)`. Chunks are summed with
//! integer addition so the estimate is independent of thread scheduling.

use std::f64::consts::TAU;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::geometry::{length_scale, AgentConfig, ApolloniusDisc, Vec2};
use crate::gradients::{area_gradients_with, AreaGradients, PrefactorForm};
use crate::safeset::{boundary, SafeSetBoundary};

/// Samples per Monte Carlo chunk.
pub const MC_CHUNK: u64 = 1 << 16;

/// Default finite-difference step relative to the configuration scale.
pub const FD_STEP_REL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|exact − mean|` in units of the standard error.
    pub fn z_score(&self, exact: f64) -> f64 {
        (exact - self.mean).abs() / self.std_error
    }
}

#[inline]
fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Rejection-sampling estimate of the area of the intersection of
/// `discs`, drawing uniformly from the bounding box of the smallest disc.
pub fn mc_area(discs: &[ApolloniusDisc], samples: u64, seed: u64) -> Result<McEstimate, OracleError> {
    if samples < 1000 {
        return Err(OracleError::InvalidArgument(format!("need at least 1000 samples, got {samples}")));
    }
    let smallest = discs
        .iter()
        .min_by(|a, b| a.radius.total_cmp(&b.radius))
        .ok_or_else(|| OracleError::InvalidArgument("no discs".into()))?;
    let r = smallest.radius;
    let lo = smallest.center - Vec2::new(r, r);
    let side = 2.0 * r;

    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let n = MC_CHUNK.min(samples - k * MC_CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut hits = 0u64;
            for _ in 0..n {
                let q = lo + Vec2::new(side * unit_f64(rng.next_u64()), side * unit_f64(rng.next_u64()));
                if discs.iter().all(|d| d.contains(q)) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();

    let p = hits as f64 / samples as f64;
    let box_area = side * side;
    Ok(McEstimate {
        mean: p * box_area,
        std_error: (p * (1.0 - p) / samples as f64).sqrt() * box_area,
        samples,
        seed,
    })
}

/// Which agent's position a finite-difference probe moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgentSelector {
    Evader,
    Pursuer(usize),
}

impl std::fmt::Display for AgentSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AgentSelector::Evader => write!(f, "evader"),
            AgentSelector::Pursuer(i) => write!(f, "pursuer {i}"),
        }
    }
}

fn probe_area(
    evader: &AgentConfig,
    pursuers: &[AgentConfig],
    who: AgentSelector,
    offset: Vec2,
) -> Result<f64, OracleError> {
    let mut e = *evader;
    let mut ps = pursuers.to_vec();
    match who {
        AgentSelector::Evader => e.position += offset,
        AgentSelector::Pursuer(i) => ps[i].position += offset,
    }
    boundary(&e, &ps)
        .map(|b| b.area)
        .map_err(|source| OracleError::DegenerateProbe {
            agent: who.to_string(),
            offset,
            source,
        })
}

/// Central differences of the safe-set area along both axes of the
/// selected agent's position.
pub fn fd_gradient(
    evader: &AgentConfig,
    pursuers: &[AgentConfig],
    who: AgentSelector,
    h: f64,
) -> Result<Vec2, OracleError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(OracleError::InvalidArgument(format!("step must be positive, got {h}")));
    }
    if let AgentSelector::Pursuer(i) = who {
        if i >= pursuers.len() {
            return Err(OracleError::InvalidArgument(format!("no pursuer {i}")));
        }
    }
    let axis = |u: Vec2| -> Result<f64, OracleError> {
        let plus = probe_area(evader, pursuers, who, u * h)?;
        let minus = probe_area(evader, pursuers, who, u * -h)?;
        Ok((plus - minus) / (2.0 * h))
    };
    Ok(Vec2::new(axis(Vec2::new(1.0, 0.0))?, axis(Vec2::new(0.0, 1.0))?))
}

/// Angles `2πk/resolution` at which circle `i` lies inside every other
/// disc.
pub fn arc_range_oracle(i: usize, discs: &[ApolloniusDisc], resolution: usize) -> Result<Vec<f64>, OracleError> {
    Ok(accepted_bins(i, discs, resolution)?
        .iter()
        .enumerate()
        .filter(|(_, &ok)| ok)
        .map(|(k, _)| bin_angle(k, resolution))
        .collect())
}

#[inline]
pub fn bin_angle(k: usize, resolution: usize) -> f64 {
    TAU * k as f64 / resolution as f64
}

/// Acceptance mask behind [`arc_range_oracle`].
pub fn accepted_bins(i: usize, discs: &[ApolloniusDisc], resolution: usize) -> Result<Vec<bool>, OracleError> {
    if resolution < 360 {
        return Err(OracleError::InvalidArgument(format!("resolution must be at least 360, got {resolution}")));
    }
    let circle = discs
        .get(i)
        .ok_or_else(|| OracleError::InvalidArgument(format!("no disc {i}")))?;
    Ok((0..resolution)
        .map(|k| {
            let q = circle.point_at(bin_angle(k, resolution));
            discs
                .iter()
                .enumerate()
                .all(|(j, d)| j == i || (q - d.center).norm() <= d.radius)
        })
        .collect())
}

/// Number of maximal circular runs of `true` in the mask (a mask that is
/// all `true` counts as one run).
pub fn circular_runs(mask: &[bool]) -> usize {
    let n = mask.len();
    if n == 0 {
        return 0;
    }
    if mask.iter().all(|&b| b) {
        return 1;
    }
    (0..n).filter(|&k| mask[k] && !mask[(k + n - 1) % n]).count()
}

/// One agent's analytic and finite-difference gradient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradRow {
    pub agent: String,
    pub analytic: Vec2,
    pub finite_difference: Vec2,
    pub rel_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradCheckReport {
    pub rows: Vec<GradRow>,
    /// Largest FD gradient norm; the denominator of every relative error.
    pub gradient_scale: f64,
    pub max_rel_error: f64,
}

/// Compares analytic gradients against central differences for every
/// agent. Relative errors are taken against the largest FD gradient norm
/// of the configuration, so agents with a zero gradient are measured on
/// the same scale as the rest.
pub fn gradcheck(
    evader: &AgentConfig,
    pursuers: &[AgentConfig],
    h: f64,
    form: PrefactorForm,
) -> Result<GradCheckReport, OracleError> {
    let b = boundary(evader, pursuers).map_err(|source| OracleError::DegenerateProbe {
        agent: "configuration".into(),
        offset: Vec2::ZERO,
        source,
    })?;
    let analytic = area_gradients_with(form, evader, pursuers, &b);
    let mut pairs = Vec::with_capacity(pursuers.len() + 1);
    for i in 0..pursuers.len() {
        let who = AgentSelector::Pursuer(i);
        pairs.push((who, analytic.per_pursuer[i], fd_gradient(evader, pursuers, who, h)?));
    }
    pairs.push((
        AgentSelector::Evader,
        analytic.evader,
        fd_gradient(evader, pursuers, AgentSelector::Evader, h)?,
    ));
    let scale = pairs.iter().map(|(_, _, f)| f.norm()).fold(0.0, f64::max);
    let denom = if scale > 0.0 { scale } else { 1.0 };
    let rows: Vec<GradRow> = pairs
        .into_iter()
        .map(|(who, a, f)| GradRow {
            agent: who.to_string(),
            analytic: a,
            finite_difference: f,
            rel_error: (a - f).norm() / denom,
        })
        .collect();
    let max_rel_error = rows.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    Ok(GradCheckReport {
        rows,
        gradient_scale: scale,
        max_rel_error,
    })
}

/// Margin (relative to the configuration scale) every topological
/// decision must clear for a random configuration to count as
/// non-degenerate.
pub const WELL_CONDITIONED_MARGIN: f64 = 1e-3;

/// Whether small perturbations of the configuration leave the boundary
/// topology unchanged: no near-tangent circle pairs, no near-tied
/// containment, no arc endpoint close to a third circle and no sliver
/// arcs.
pub fn well_conditioned(b: &SafeSetBoundary) -> bool {
    let tol = WELL_CONDITIONED_MARGIN * b.scale;
    let discs = &b.discs;
    for (i, di) in discs.iter().enumerate() {
        for dj in discs.iter().skip(i + 1) {
            let d = di.center.distance(dj.center);
            if (d - (di.radius - dj.radius).abs()).abs() < tol || (d - (di.radius + dj.radius)).abs() < tol {
                return false;
            }
        }
    }
    for arc in &b.arcs {
        if arc.delta_theta() < WELL_CONDITIONED_MARGIN {
            return false;
        }
    }
    if b.arcs.len() > 1 {
        for (k, arc) in b.arcs.iter().enumerate() {
            let next = &b.arcs[(k + 1) % b.arcs.len()];
            let v = arc.end_point(b.disc_of(arc));
            for (m, d) in discs.iter().enumerate() {
                if m == arc.disc_index || m == next.disc_index {
                    continue;
                }
                if ((v - d.center).norm() - d.radius).abs() < tol {
                    return false;
                }
            }
        }
    }
    true
}

/// Parameters for [`random_configuration`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomConfigSpec {
    pub min_pursuers: usize,
    pub max_pursuers: usize,
    pub min_alpha: f64,
    pub max_alpha: f64,
    pub min_distance: f64,
    pub max_distance: f64,
}

impl Default for RandomConfigSpec {
    fn default() -> Self {
        Self {
            min_pursuers: 2,
            max_pursuers: 6,
            min_alpha: 0.2,
            max_alpha: 0.9,
            min_distance: 2.0,
            max_distance: 20.0,
        }
    }
}

/// Draws well-conditioned configurations until one is found.
///
/// The evader sits in `[-5, 5]²` with speed in `[0.5, 2]`; each pursuer is
/// placed at a uniform bearing and distance with a uniform speed ratio.
pub fn random_configuration(rng: &mut ChaCha8Rng, spec: &RandomConfigSpec) -> (AgentConfig, Vec<AgentConfig>) {
    loop {
        let e = AgentConfig::new(
            Vec2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)),
            rng.gen_range(0.5..2.0),
        );
        let n = rng.gen_range(spec.min_pursuers..=spec.max_pursuers);
        let ps: Vec<AgentConfig> = (0..n)
            .map(|_| {
                let bearing = rng.gen_range(0.0..TAU);
                let dist = rng.gen_range(spec.min_distance..spec.max_distance);
                let alpha = rng.gen_range(spec.min_alpha..spec.max_alpha);
                AgentConfig::new(e.position + Vec2::from_angle(bearing) * dist, e.speed / alpha)
            })
            .collect();
        match boundary(&e, &ps) {
            Ok(b) if well_conditioned(&b) => return (e, ps),
            _ => continue,
        }
    }
}

/// Gradients from the oracle side, for callers that want an
/// [`AreaGradients`] built from central differences.
pub fn fd_gradients(evader: &AgentConfig, pursuers: &[AgentConfig], h: f64) -> Result<AreaGradients, OracleError> {
    Ok(AreaGradients {
        per_pursuer: (0..pursuers.len())
            .map(|i| fd_gradient(evader, pursuers, AgentSelector::Pursuer(i), h))
            .collect::<Result<_, _>>()?,
        evader: fd_gradient(evader, pursuers, AgentSelector::Evader, h)?,
    })
}

/// `FD_STEP_REL · max_i ‖e − p_i‖`.
pub fn default_fd_step(evader: &AgentConfig, pursuers: &[AgentConfig]) -> f64 {
    FD_STEP_REL * length_scale(evader.position, pursuers)
}
