//! The Dubins interval problem: shortest path when departure and arrival
//! headings are each restricted to a closed interval.
//!
//! The optimum is attained either at one of the four interval corners or by
//! one of the six two-segment kinds at its own constrained optimum, so the
//! solver evaluates that finite candidate list and keeps the best.

pub mod lrl;
pub mod oracle;
pub mod two_segment;

use serde::{Deserialize, Serialize};

use crate::angle::AngleInterval;
use crate::dubins::{canonical_frame, dubins_shortest, Configuration, DubinsPath, Point, TurnRadius};

pub use lrl::{lrl_geometry, LrlGeometry};
pub use oracle::{grid_oracle, kind_grid_oracle, KindOracle};
pub use two_segment::{
    opt_kind, opt_rl, opt_rs, reflect_problem, Branch, Extremum, Reflection, TwoSegmentCandidate, TwoSegmentGeometry,
    TwoSegmentKind,
};

/// Which interval end a corner uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum End {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CandidateLabel {
    Corner { departure: End, arrival: End },
    TwoSegment { kind: TwoSegmentKind, extremum: Extremum, branch: Option<Branch> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub label: CandidateLabel,
    /// Length of the path that produced the candidate.
    pub value: f64,
    pub theta1: f64,
    pub theta2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalSolution {
    pub value: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub winning: Candidate,
    pub all_candidates: Vec<Candidate>,
}

impl IntervalSolution {
    /// The shortest Dubins path at the achieving headings.
    pub fn path(&self, p1: Point, p2: Point, rho: TurnRadius) -> DubinsPath {
        dubins_shortest(&Configuration::at(p1, self.theta1), &Configuration::at(p2, self.theta2), rho)
    }
}

/// Exact minimum of `d12` over `I1 × I2`.
pub fn solve_interval(p1: Point, i1: &AngleInterval, p2: Point, i2: &AngleInterval, rho: TurnRadius) -> IntervalSolution {
    let frame = canonical_frame(p1, p2);
    let mut cands = Vec::with_capacity(32);

    for (departure, t1) in [(End::Min, i1.lo()), (End::Max, i1.hi())] {
        for (arrival, t2) in [(End::Min, i2.lo()), (End::Max, i2.hi())] {
            let len = dubins_shortest(&Configuration::at(p1, t1), &Configuration::at(p2, t2), rho).total;
            cands.push(Candidate {
                label: CandidateLabel::Corner { departure, arrival },
                value: len,
                theta1: t1,
                theta2: t2,
            });
        }
    }

    let a1 = i1.to_arc(-frame.rotation);
    let a2 = i2.to_arc(-frame.rotation);
    for kind in TwoSegmentKind::ALL {
        for c in opt_kind(kind, frame.xbar, &a1, &a2, rho) {
            let g = c.geometry;
            let (Some(t1), Some(t2)) = (
                i1.representative(frame.invert_heading(g.theta1)),
                i2.representative(frame.invert_heading(g.theta2)),
            ) else {
                continue;
            };
            cands.push(Candidate {
                label: CandidateLabel::TwoSegment {
                    kind,
                    extremum: c.extremum,
                    branch: g.branch,
                },
                value: g.total,
                theta1: t1,
                theta2: t2,
            });
        }
    }

    let winning = *cands
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("corners are always present");
    let d12 = dubins_shortest(
        &Configuration::at(p1, winning.theta1),
        &Configuration::at(p2, winning.theta2),
        rho,
    )
    .total;
    IntervalSolution {
        value: winning.value.min(d12).max(p1.distance(&p2)),
        theta1: winning.theta1,
        theta2: winning.theta2,
        winning,
        all_candidates: cands,
    }
}
