//! End-to-end bounds for one instance: Euclidean baseline, certified lower
//! bounds from heading partitions, and feasible tours from fixed headings.

pub mod instance;
pub mod render;
pub mod report;

use std::f64::consts::TAU;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dubins::{dubins_shortest, Configuration, DubinsPath};
use crate::error::{Error, Result};
use crate::gtsp::{
    build_lower_matrix, build_upper_matrix, held_karp, set_level_relaxation, solve_exact, solve_heuristic, GtspInstance,
    Mode, Partition, Tour, EXACT_CAP, RELAXATION_CAP,
};
use crate::interval::{solve_interval, IntervalSolution};

pub use instance::{generate_instance, ProblemInstance};

/// Seed offset for heuristic runs, so they depend only on the instance.
const HEURISTIC_SALT: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Exact one-in-a-set TSP; certified, limited to [`EXACT_CAP`] targets.
    Exact,
    /// Set-level relaxation (certified) plus a heuristic BP tour (not).
    Relaxed,
}

impl Strategy {
    /// Exact when the instance is small enough, relaxed otherwise.
    pub fn auto(n: usize) -> Self {
        if n <= EXACT_CAP {
            Strategy::Exact
        } else {
            Strategy::Relaxed
        }
    }
}

/// Where the `k` fixed headings of an upper bound sit on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeadingPlacement {
    /// `2πj/k`, the breakpoints of the uniform `k`-partition.
    Endpoints,
    /// `2π(j + ½)/k`.
    Midpoints,
}

/// `m` uniform intervals at every target.
pub fn uniform_partition(m: usize) -> Result<Partition> {
    Partition::uniform(m)
}

pub fn headings(k: usize, placement: HeadingPlacement) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::Invalid("need at least one heading per target".into()));
    }
    let offset = match placement {
        HeadingPlacement::Endpoints => 0.0,
        HeadingPlacement::Midpoints => 0.5,
    };
    Ok((0..k).map(|j| TAU * (j as f64 + offset) / k as f64).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub m: usize,
    pub strategy: Strategy,
    /// Certified bound: the BP optimum (exact) or the set-level relaxation.
    pub value: f64,
    /// BP optimum tour (exact) or heuristic BP tour (relaxed).
    pub tour: Tour,
    /// Cost of the heuristic BP tour under the relaxed strategy. It is an
    /// estimate of the BP optimum from above and is not a certified bound.
    pub heuristic: Option<f64>,
    pub seconds: f64,
}

pub fn lower_bound(inst: &ProblemInstance, m: usize, strategy: Strategy) -> Result<LowerBound> {
    let clock = Instant::now();
    let gtsp = lower_instance(inst, m)?;
    let (value, tour, heuristic) = match strategy {
        Strategy::Exact => {
            let tour = solve_exact(&gtsp)?;
            (tour.cost, tour, None)
        }
        Strategy::Relaxed => {
            let value = set_level_relaxation(&gtsp)?;
            let tour = solve_heuristic(&gtsp, inst.seed ^ HEURISTIC_SALT);
            let h = tour.cost;
            (value, tour, Some(h))
        }
    };
    Ok(LowerBound {
        m,
        strategy,
        value,
        tour,
        heuristic,
        seconds: clock.elapsed().as_secs_f64(),
    })
}

pub fn lower_instance(inst: &ProblemInstance, m: usize) -> Result<GtspInstance> {
    let part = uniform_partition(m)?;
    build_lower_matrix(&inst.targets, &vec![part; inst.n()], inst.rho)
}

pub fn upper_instance(inst: &ProblemInstance, k: usize, placement: HeadingPlacement) -> Result<GtspInstance> {
    let hs = headings(k, placement)?;
    build_upper_matrix(&inst.targets, &vec![hs; inst.n()], inst.rho)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub k: usize,
    pub placement: HeadingPlacement,
    pub value: f64,
    pub tour: Tour,
    /// Whether the heading-restricted tour is optimal among those headings.
    pub exact: bool,
    /// Start configuration and path of every leg, in tour order.
    pub legs: Vec<(Configuration, DubinsPath)>,
    pub seconds: f64,
}

/// Best tour over `k` fixed headings per target. The tour is re-evaluated
/// leg by leg with [`dubins_shortest`] before it is returned.
pub fn upper_bound(inst: &ProblemInstance, k: usize, placement: HeadingPlacement) -> Result<UpperBound> {
    let clock = Instant::now();
    let gtsp = upper_instance(inst, k, placement)?;
    let exact = inst.n() <= EXACT_CAP;
    let tour = if exact {
        solve_exact(&gtsp)?
    } else {
        solve_heuristic(&gtsp, inst.seed ^ HEURISTIC_SALT)
    };
    let hs = headings(k, placement)?;
    let legs = upper_legs(inst, &tour, &hs);
    let total: f64 = legs.iter().map(|(_, p)| p.total).sum();
    if (total - tour.cost).abs() > 1e-9 * tour.cost.max(1.0) {
        return Err(Error::Invalid(format!(
            "upper tour re-evaluates to {total} but the matrix says {}",
            tour.cost
        )));
    }
    Ok(UpperBound {
        k,
        placement,
        value: tour.cost,
        tour,
        exact,
        legs,
        seconds: clock.elapsed().as_secs_f64(),
    })
}

/// Legs of a fixed-heading tour.
pub fn upper_legs(inst: &ProblemInstance, tour: &Tour, headings: &[f64]) -> Vec<(Configuration, DubinsPath)> {
    tour.legs()
        .map(|(a, b)| {
            let from = Configuration::at(inst.targets[a], headings[tour.choice[a]]);
            let to = Configuration::at(inst.targets[b], headings[tour.choice[b]]);
            (from, dubins_shortest(&from, &to, inst.rho))
        })
        .collect()
}

/// Interval-problem solutions along a lower-bound tour. Consecutive legs may
/// leave a target with a different heading than they arrived with.
pub fn lower_legs(inst: &ProblemInstance, tour: &Tour, partition: &Partition) -> Vec<IntervalSolution> {
    tour.legs()
        .map(|(a, b)| {
            solve_interval(
                inst.targets[a],
                &partition.intervals[tour.choice[a]],
                inst.targets[b],
                &partition.intervals[tour.choice[b]],
                inst.rho,
            )
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Etsp {
    pub value: f64,
    /// False when the instance exceeds the exact cap and a heuristic tour
    /// was used instead; the value is then only an upper estimate.
    pub exact: bool,
    pub order: Vec<usize>,
    pub seconds: f64,
}

/// Euclidean TSP optimum. It runs through the same dynamic program as the
/// exact lower bound, so the one-interval lower bound reproduces it bit for
/// bit.
pub fn etsp(inst: &ProblemInstance) -> Result<Etsp> {
    let clock = Instant::now();
    let n = inst.n();
    let matrix: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { f64::INFINITY } else { inst.targets[i].distance(&inst.targets[j]) }).collect())
        .collect();
    let (value, order, exact) = if n <= EXACT_CAP.max(RELAXATION_CAP) {
        let (v, o) = held_karp(&matrix, RELAXATION_CAP)?;
        (v, o, true)
    } else {
        let g = GtspInstance::from_matrix(Mode::Upper, &vec![1; n], matrix)?;
        let t = solve_heuristic(&g, inst.seed ^ HEURISTIC_SALT);
        (t.cost, t.order, false)
    };
    Ok(Etsp {
        value,
        exact,
        order,
        seconds: clock.elapsed().as_secs_f64(),
    })
}
