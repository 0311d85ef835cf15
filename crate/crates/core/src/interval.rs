//! Closed intervals on the circle of angles.

use std::f64::consts::TAU;

/// A closed arc of angles `[start, start + width]` taken mod 2π.
///
/// `width == 2π` is the full circle and `width == 0` is the empty set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcInterval {
    start: f64,
    width: f64,
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

impl ArcInterval {
    pub const FULL: ArcInterval = ArcInterval { start: 0.0, width: TAU };
    pub const EMPTY: ArcInterval = ArcInterval { start: 0.0, width: 0.0 };

    pub fn new(start: f64, width: f64) -> Self {
        if width >= TAU {
            return Self::FULL;
        }
        if width <= 0.0 || width.is_nan() {
            return Self::EMPTY;
        }
        Self {
            start: wrap_angle(start),
            width,
        }
    }

    /// `[center − half_width, center + half_width]`.
    pub fn centered(center: f64, half_width: f64) -> Self {
        Self::new(center - half_width, 2.0 * half_width)
    }

    #[inline]
    pub fn start(&self) -> f64 {
        self.start
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Unwrapped end angle, `start + width` (may exceed 2π).
    #[inline]
    pub fn end(&self) -> f64 {
        self.start + self.width
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        self.start + 0.5 * self.width
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.width <= 0.0
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.width >= TAU
    }

    pub fn contains(&self, theta: f64) -> bool {
        if self.is_empty() {
            return false;
        }
        self.is_full() || wrap_angle(theta - self.start) <= self.width
    }

    /// The at most two linear pieces of this interval inside `[0, 2π]`.
    fn linear_pieces(&self) -> Vec<(f64, f64)> {
        if self.is_empty() {
            Vec::new()
        } else if self.is_full() {
            vec![(0.0, TAU)]
        } else if self.end() <= TAU {
            vec![(self.start, self.end())]
        } else {
            vec![(self.start, TAU), (0.0, self.end() - TAU)]
        }
    }

    /// Intersection of several arcs, as the list of its connected
    /// components in increasing order of start angle.
    ///
    /// An empty iterator yields the full circle. Touching components
    /// (zero-width pieces) are reported as they come out of the linear
    /// intersection; callers decide how to treat them.
    pub fn intersect_all<I>(intervals: I) -> Vec<ArcInterval>
    where
        I: IntoIterator<Item = ArcInterval>,
    {
        let mut pieces: Vec<(f64, f64)> = vec![(0.0, TAU)];
        for iv in intervals {
            let other = iv.linear_pieces();
            let mut next = Vec::with_capacity(pieces.len() + other.len());
            for &(a_lo, a_hi) in &pieces {
                for &(b_lo, b_hi) in &other {
                    let lo = a_lo.max(b_lo);
                    let hi = a_hi.min(b_hi);
                    if lo <= hi {
                        next.push((lo, hi));
                    }
                }
            }
            pieces = next;
            if pieces.is_empty() {
                return Vec::new();
            }
        }
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0));

        if pieces.len() == 1 && pieces[0] == (0.0, TAU) {
            return vec![Self::FULL];
        }
        // A piece ending at 2π continues into the piece starting at 0.
        let wraps = pieces.len() > 1 && pieces[0].0 == 0.0 && pieces[pieces.len() - 1].1 == TAU;
        let mut out: Vec<ArcInterval> = Vec::with_capacity(pieces.len());
        if wraps {
            let first = pieces.remove(0);
            let last = pieces.pop().expect("at least two pieces");
            out.extend(pieces.iter().map(|&(lo, hi)| Self::raw(lo, hi - lo)));
            out.push(Self::raw(last.0, (TAU - last.0) + first.1));
        } else {
            out.extend(pieces.iter().map(|&(lo, hi)| Self::raw(lo, hi - lo)));
        }
        out.sort_by(|a, b| a.start.total_cmp(&b.start));
        out
    }

    // Keeps zero-width components distinguishable from EMPTY.
    fn raw(start: f64, width: f64) -> Self {
        Self {
            start: wrap_angle(start),
            width: width.min(TAU),
        }
    }
}
