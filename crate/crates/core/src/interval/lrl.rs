//! LRL paths as a function of the arrival heading, departure heading fixed at 0.
//!
//! With the departure pose at the origin heading along +x, the first left
//! circle is centered at `(0, ρ)`. The middle right circle sits at
//! `(0, ρ) + 2ρ(cos α, sin α)` and the last left circle at a further
//! `2ρ(cos β, −sin β)`, so that
//!
//! ```text
//! 2ρ sin α + ρ = 2ρ sin β + ρ cos θ2 + ȳ
//! 2ρ cos α + 2ρ cos β + ρ sin θ2 = x̄
//! ```
//!
//! The arcs are `π/2 + α`, `π + α + β` and `θ2 + π/2 + β`, giving the length
//! `(2π + 2α + 2β + θ2)ρ`. Only the solution with `α + β ∈ [0, π]` (middle
//! arc of at least a half turn) is produced.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::angle::normalize;
use crate::dubins::{TurnRadius, GEOMETRY_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LrlGeometry {
    pub alpha: f64,
    pub beta: f64,
    pub theta2: f64,
    /// `(2π + 2α + 2β + θ2)ρ`, continuous in `θ2`.
    pub total: f64,
}

impl LrlGeometry {
    /// Closed-form `d total / d θ2`.
    pub fn derivative(&self, rho: TurnRadius) -> f64 {
        let s = (self.alpha + self.beta).sin();
        rho.get() * (((self.theta2 - self.alpha).cos() + (self.theta2 + self.beta).cos()) / s + 1.0)
    }

    /// Arc angles of the three turns, each in `[0, 2π)`.
    pub fn arcs(&self) -> [f64; 3] {
        [
            normalize(FRAC_PI_2 + self.alpha),
            normalize(PI + self.alpha + self.beta),
            normalize(self.theta2 + FRAC_PI_2 + self.beta),
        ]
    }

    /// Residuals of the two constraint equations.
    pub fn residuals(&self, xbar: f64, ybar: f64, rho: TurnRadius) -> [f64; 2] {
        let r = rho.get();
        let (a, b, t) = (self.alpha, self.beta, self.theta2);
        [
            2.0 * r * a.sin() + r - (2.0 * r * b.sin() + r * t.cos() + ybar),
            2.0 * r * a.cos() + 2.0 * r * b.cos() + r * t.sin() - xbar,
        ]
    }
}

/// Solves for `α` and `β`; `None` when the outer circles are more than `4ρ`
/// apart.
pub fn lrl_geometry(theta2: f64, xbar: f64, ybar: f64, rho: TurnRadius) -> Option<LrlGeometry> {
    let r = rho.get();
    let u = xbar - r * theta2.sin();
    let v = ybar + r * theta2.cos() - r;
    let dist = u.hypot(v);
    if dist > 4.0 * r * (1.0 + GEOMETRY_TOL) {
        return None;
    }
    let gamma = v.atan2(u);
    let delta = (dist / (4.0 * r)).min(1.0).acos();
    let alpha = gamma + delta;
    // keep α near the principal range so that the length stays continuous
    let alpha = if alpha > PI { alpha - TAU } else { alpha };
    let beta = 2.0 * delta - alpha;
    Some(LrlGeometry {
        alpha,
        beta,
        theta2,
        total: (TAU + 2.0 * alpha + 2.0 * beta + theta2) * r,
    })
}
