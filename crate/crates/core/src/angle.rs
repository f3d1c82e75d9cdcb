//! Heading angles and closed heading intervals.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack used when testing whether an angle lies inside an interval.
pub const ANGLE_SLACK: f64 = 1e-12;

/// Normalizes an angle into `[0, 2π)`.
pub fn normalize(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Counter-clockwise angular distance from `from` to `to`, in `[0, 2π)`.
pub fn ccw_distance(from: f64, to: f64) -> f64 {
    normalize(to - from)
}

/// Closed heading interval `[lo, hi]` with `0 ≤ lo ≤ hi ≤ 2π`.
///
/// Containment is tested modulo 2π, so `2π ∈ [0, 0]` and `0 ∈ [3π/2, 2π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleInterval {
    lo: f64,
    hi: f64,
}

impl AngleInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi > TAU || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// The whole circle `[0, 2π]`.
    pub const fn full() -> Self {
        Self { lo: 0.0, hi: TAU }
    }

    /// Degenerate interval holding a single heading.
    pub fn point(theta: f64) -> Self {
        let t = normalize(theta);
        Self { lo: t, hi: t }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.representative(theta).is_some()
    }

    /// Returns the member of `[lo, hi]` congruent to `theta` modulo 2π,
    /// accepting [`ANGLE_SLACK`] of rounding at either end.
    pub fn representative(&self, theta: f64) -> Option<f64> {
        let t = normalize(theta);
        for cand in [t, t + TAU, t - TAU] {
            if cand >= self.lo - ANGLE_SLACK && cand <= self.hi + ANGLE_SLACK {
                return Some(cand.clamp(self.lo, self.hi));
            }
        }
        None
    }

    pub fn is_subset_of(&self, other: &AngleInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// The interval seen from a frame rotated by `-rotation`.
    pub fn to_arc(&self, rotation: f64) -> Arc {
        Arc::new(self.lo - rotation, self.width())
    }
}

/// Heading arc on the circle: every angle `start + t` with `t ∈ [0, width]`.
///
/// Unlike [`AngleInterval`] an arc may straddle the zero heading; this is the
/// form intervals take once rotated into a canonical frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub width: f64,
}

impl Arc {
    pub fn new(start: f64, width: f64) -> Self {
        Self {
            start: normalize(start),
            width: width.clamp(0.0, TAU),
        }
    }

    pub fn end(&self) -> f64 {
        normalize(self.start + self.width)
    }

    pub fn contains(&self, theta: f64) -> bool {
        if self.width >= TAU - ANGLE_SLACK {
            return true;
        }
        let d = ccw_distance(self.start, theta);
        d <= self.width + ANGLE_SLACK || d >= TAU - ANGLE_SLACK
    }

    /// Mirror image under `θ ↦ −θ`.
    pub fn negated(&self) -> Self {
        Self::new(-(self.start + self.width), self.width)
    }

    /// Some angle common to both arcs, if they intersect.
    pub fn common_angle(&self, other: &Arc) -> Option<f64> {
        if other.contains(self.start) {
            Some(self.start)
        } else if self.contains(other.start) {
            Some(other.start)
        } else {
            None
        }
    }
}
