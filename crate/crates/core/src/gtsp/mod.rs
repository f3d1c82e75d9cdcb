//! One-in-a-set TSP over heading choices.
//!
//! Each target contributes a set of nodes (heading intervals for lower
//! bounds, fixed headings for upper bounds) and a tour visits exactly one
//! node per set. Small instances are solved exactly by dynamic programming;
//! larger ones get a local-search tour and a certified set-level bound.

pub mod transform;
pub mod tsplib;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::{AngleInterval, ANGLE_SLACK};
use crate::dubins::{dubins_shortest, Configuration, Point, TurnRadius};
use crate::error::{Error, Result};
use crate::interval::solve_interval;

pub use transform::{atsp_to_stsp, noon_bean, AtspInstance, StspInstance};

/// Largest number of sets [`solve_exact`] accepts by default.
pub const EXACT_CAP: usize = 16;
/// Largest number of sets [`set_level_relaxation`] accepts by default.
pub const RELAXATION_CAP: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Nodes are heading intervals and costs are interval-problem optima.
    Lower,
    /// Nodes are fixed headings and costs are Dubins distances.
    Upper,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Lower => "lower",
            Mode::Upper => "upper",
        }
    }
}

/// Where a node comes from: the target it belongs to and its index there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeLabel {
    pub target: usize,
    pub choice: usize,
}

/// Node-in-set cost structure.
///
/// Nodes are numbered set by set, so the nodes of set `i` are contiguous and
/// ordered by choice. Intra-set entries of the cost matrix are never read by
/// the solvers and hold `f64::INFINITY`.
#[derive(Clone, Debug, PartialEq)]
pub struct GtspInstance {
    mode: Mode,
    offsets: Vec<usize>,
    labels: Vec<NodeLabel>,
    cost: Vec<f64>,
}

impl GtspInstance {
    /// Builds an instance from per-set sizes and a full node cost matrix.
    pub fn from_matrix(mode: Mode, set_sizes: &[usize], matrix: Vec<Vec<f64>>) -> Result<Self> {
        if set_sizes.is_empty() || set_sizes.contains(&0) {
            return Err(Error::Invalid("every set needs at least one node".into()));
        }
        let n: usize = set_sizes.iter().sum();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid(format!("cost matrix must be {n}×{n}")));
        }
        let mut offsets = Vec::with_capacity(set_sizes.len() + 1);
        let mut labels = Vec::with_capacity(n);
        offsets.push(0);
        for (target, &m) in set_sizes.iter().enumerate() {
            labels.extend((0..m).map(|choice| NodeLabel { target, choice }));
            offsets.push(labels.len());
        }
        let mut cost = Vec::with_capacity(n * n);
        for (u, row) in matrix.into_iter().enumerate() {
            for (v, c) in row.into_iter().enumerate() {
                if labels[u].target == labels[v].target {
                    cost.push(f64::INFINITY);
                } else if c.is_nan() || c < 0.0 {
                    return Err(Error::Invalid(format!("cost {c} from node {u} to node {v}")));
                } else {
                    cost.push(c);
                }
            }
        }
        Ok(Self { mode, offsets, labels, cost })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n_sets(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn n_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn set_size(&self, set: usize) -> usize {
        self.offsets[set + 1] - self.offsets[set]
    }

    pub fn set_sizes(&self) -> Vec<usize> {
        (0..self.n_sets()).map(|s| self.set_size(s)).collect()
    }

    /// Node indices of one set, in choice order.
    pub fn set_nodes(&self, set: usize) -> std::ops::Range<usize> {
        self.offsets[set]..self.offsets[set + 1]
    }

    pub fn node(&self, target: usize, choice: usize) -> usize {
        self.offsets[target] + choice
    }

    pub fn label(&self, node: usize) -> NodeLabel {
        self.labels[node]
    }

    #[inline]
    pub fn cost(&self, from: usize, to: usize) -> f64 {
        self.cost[from * self.n_nodes() + to]
    }

    /// Cost between two (target, choice) pairs.
    pub fn leg(&self, from: (usize, usize), to: (usize, usize)) -> f64 {
        self.cost(self.node(from.0, from.1), self.node(to.0, to.1))
    }

    /// Dense matrix copy, intra-set entries included as `f64::INFINITY`.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.cost.chunks(self.n_nodes()).map(<[f64]>::to_vec).collect()
    }
}

/// A visiting order with one selected node per target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    /// Targets in visiting order; the tour closes back to `order[0]`.
    pub order: Vec<usize>,
    /// Selected choice for each target, indexed by target.
    pub choice: Vec<usize>,
    pub cost: f64,
}

impl Tour {
    /// Builds a tour and computes its cost on `inst`.
    pub fn new(inst: &GtspInstance, order: Vec<usize>, choice: Vec<usize>) -> Self {
        let cost = tour_cost(inst, &order, &choice);
        Self { order, choice, cost }
    }

    /// Consecutive (from, to) target pairs, including the closing leg.
    pub fn legs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| (self.order[i], self.order[(i + 1) % n]))
    }

    /// Checks that the tour visits every set once with a valid choice.
    pub fn validate(&self, inst: &GtspInstance) -> Result<()> {
        let n = inst.n_sets();
        let mut seen = vec![false; n];
        if self.order.len() != n || self.choice.len() != n {
            return Err(Error::Invalid(format!("tour must visit all {n} targets")));
        }
        for &t in &self.order {
            if t >= n || std::mem::replace(&mut seen[t], true) {
                return Err(Error::Invalid(format!("target {t} missing or repeated in tour")));
            }
            if self.choice[t] >= inst.set_size(t) {
                return Err(Error::Invalid(format!("choice {} out of range for target {t}", self.choice[t])));
            }
        }
        Ok(())
    }
}

/// Sum of leg costs along `order`, closing the cycle.
pub fn tour_cost(inst: &GtspInstance, order: &[usize], choice: &[usize]) -> f64 {
    let n = order.len();
    if n < 2 {
        return 0.0;
    }
    (0..n)
        .map(|i| {
            let (a, b) = (order[i], order[(i + 1) % n]);
            inst.leg((a, choice[a]), (b, choice[b]))
        })
        .sum()
}

/// Heading intervals tiling `[0, 2π]` at one target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub intervals: Vec<AngleInterval>,
}

impl Partition {
    pub fn new(intervals: Vec<AngleInterval>) -> Self {
        Self { intervals }
    }

    /// `m` equal intervals with breakpoints `2πj/m`. The breakpoints of `m`
    /// are bitwise a subset of those of `2m`.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("a partition needs at least one interval".into()));
        }
        // 2π·m/m can round one ulp past 2π
        let point = |j: usize| if j == m { std::f64::consts::TAU } else { std::f64::consts::TAU * j as f64 / m as f64 };
        let intervals = (0..m)
            .map(|j| AngleInterval::new(point(j), point(j + 1)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { intervals })
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Checks that consecutive intervals share endpoints and cover the circle.
    pub fn validate(&self, target: usize) -> Result<()> {
        let fail = |reason: String| Err(Error::InvalidPartition { target, reason });
        let Some(first) = self.intervals.first() else {
            return fail("no intervals".into());
        };
        if first.lo() > ANGLE_SLACK {
            return fail(format!("gap before the first interval, which starts at {}", first.lo()));
        }
        for (j, w) in self.intervals.windows(2).enumerate() {
            let (end, start) = (w[0].hi(), w[1].lo());
            if start > end + ANGLE_SLACK {
                return fail(format!("gap between intervals {j} and {} ({end} to {start})", j + 1));
            }
            if start < end - ANGLE_SLACK {
                return fail(format!("intervals {j} and {} overlap ({start} < {end})", j + 1));
            }
        }
        let last = self.intervals[self.intervals.len() - 1].hi();
        if last < std::f64::consts::TAU - ANGLE_SLACK {
            return fail(format!("gap after the last interval, which ends at {last}"));
        }
        Ok(())
    }
}

/// Lower-bound instance: node `(i, a)` is interval `a` of target `i` and the
/// cost to `(j, b)` is the interval-problem optimum between them.
pub fn build_lower_matrix(targets: &[Point], partitions: &[Partition], rho: TurnRadius) -> Result<GtspInstance> {
    if partitions.len() != targets.len() {
        return Err(Error::Invalid(format!(
            "{} partitions for {} targets",
            partitions.len(),
            targets.len()
        )));
    }
    for (i, p) in partitions.iter().enumerate() {
        p.validate(i)?;
    }
    let nodes: Vec<(usize, AngleInterval)> = partitions
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.intervals.iter().map(move |iv| (i, *iv)))
        .collect();
    let matrix = nodes
        .par_iter()
        .map(|&(i, iv)| {
            nodes
                .iter()
                .map(|&(j, jv)| {
                    if i == j {
                        f64::INFINITY
                    } else {
                        solve_interval(targets[i], &iv, targets[j], &jv, rho).value
                    }
                })
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = partitions.iter().map(Partition::len).collect();
    GtspInstance::from_matrix(Mode::Lower, &sizes, matrix)
}

/// Upper-bound instance: node `(i, a)` is the fixed heading `headings[i][a]`
/// and costs are Dubins distances, so every tour is a feasible Dubins tour.
pub fn build_upper_matrix(targets: &[Point], headings: &[Vec<f64>], rho: TurnRadius) -> Result<GtspInstance> {
    if headings.len() != targets.len() {
        return Err(Error::Invalid(format!("{} heading sets for {} targets", headings.len(), targets.len())));
    }
    let nodes: Vec<Configuration> = headings
        .iter()
        .zip(targets)
        .flat_map(|(hs, p)| hs.iter().map(move |&h| Configuration::at(*p, h)))
        .collect();
    let owner: Vec<usize> = headings.iter().enumerate().flat_map(|(i, hs)| std::iter::repeat_n(i, hs.len())).collect();
    let matrix = (0..nodes.len())
        .into_par_iter()
        .map(|u| {
            (0..nodes.len())
                .map(|v| {
                    if owner[u] == owner[v] {
                        f64::INFINITY
                    } else {
                        dubins_shortest(&nodes[u], &nodes[v], rho).total
                    }
                })
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = headings.iter().map(Vec::len).collect();
    GtspInstance::from_matrix(Mode::Upper, &sizes, matrix)
}

/// Optimal tour by dynamic programming over (visited sets, last node),
/// rooted at set 0. Refuses instances with more than [`EXACT_CAP`] sets.
pub fn solve_exact(inst: &GtspInstance) -> Result<Tour> {
    solve_exact_with_cap(inst, EXACT_CAP)
}

pub fn solve_exact_with_cap(inst: &GtspInstance, cap: usize) -> Result<Tour> {
    let n = inst.n_sets();
    if n > cap {
        return Err(Error::CapExceeded { what: "exact GTSP", got: n, cap });
    }
    let dp = SubsetDp::new(inst);
    let (cost, order, choice) = dp.solve(true);
    if !cost.is_finite() {
        return Err(Error::Invalid("no tour with finite cost exists".into()));
    }
    Ok(Tour { order, choice, cost })
}

/// Optimal cycle over a plain cost matrix (diagonal ignored). Shares the
/// dynamic program of [`solve_exact`], so a GTSP with singleton sets and
/// the same matrix gives a bitwise identical value.
pub fn held_karp(matrix: &[Vec<f64>], cap: usize) -> Result<(f64, Vec<usize>)> {
    let inst = GtspInstance::from_matrix(Mode::Upper, &vec![1; matrix.len()], matrix.to_vec())?;
    let tour = solve_exact_with_cap(&inst, cap)?;
    Ok((tour.cost, tour.order))
}

/// Certified lower bound: each set is contracted to a super-node whose
/// distance to another is the cheapest member pair, and that ATSP is solved
/// exactly. Every GTSP tour maps to a set-level tour that costs no more.
pub fn set_level_relaxation(inst: &GtspInstance) -> Result<f64> {
    set_level_relaxation_with_cap(inst, RELAXATION_CAP)
}

pub fn set_level_relaxation_with_cap(inst: &GtspInstance, cap: usize) -> Result<f64> {
    let n = inst.n_sets();
    if n > cap {
        return Err(Error::CapExceeded { what: "set-level relaxation", got: n, cap });
    }
    let matrix: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return f64::INFINITY;
                    }
                    let mut best = f64::INFINITY;
                    for u in inst.set_nodes(i) {
                        for v in inst.set_nodes(j) {
                            best = best.min(inst.cost(u, v));
                        }
                    }
                    best
                })
                .collect()
        })
        .collect();
    let collapsed = GtspInstance::from_matrix(inst.mode(), &vec![1; n], matrix)?;
    let (cost, _, _) = SubsetDp::new(&collapsed).solve(false);
    Ok(cost)
}

/// Held–Karp style table over subsets of the non-root sets.
struct SubsetDp<'a> {
    inst: &'a GtspInstance,
    /// Node index of local slot `k` (all nodes outside set 0).
    slots: Vec<usize>,
    /// First and one-past-last slot of each non-root set.
    slot_range: Vec<(usize, usize)>,
}

impl<'a> SubsetDp<'a> {
    fn new(inst: &'a GtspInstance) -> Self {
        let mut slots = Vec::new();
        let mut slot_range = Vec::new();
        for s in 1..inst.n_sets() {
            let start = slots.len();
            slots.extend(inst.set_nodes(s));
            slot_range.push((start, slots.len()));
        }
        Self { inst, slots, slot_range }
    }

    /// Returns (cost, order, choice). Start nodes in set 0 are tried in
    /// choice order and only strict improvements replace the incumbent.
    fn solve(&self, reconstruct: bool) -> (f64, Vec<usize>, Vec<usize>) {
        let inst = self.inst;
        let n = inst.n_sets();
        if n == 1 {
            return (0.0, vec![0], vec![0]);
        }
        let k = n - 1;
        let width = self.slots.len();
        let full = (1usize << k) - 1;
        let mut dp = vec![f64::INFINITY; (1 << k) * width];
        let mut parent = if reconstruct { vec![u32::MAX; (1 << k) * width] } else { Vec::new() };

        let mut best = (f64::INFINITY, 0usize);
        let mut best_path = Vec::new();
        for start in inst.set_nodes(0) {
            dp.fill(f64::INFINITY);
            for (s, &(lo, hi)) in self.slot_range.iter().enumerate() {
                for slot in lo..hi {
                    dp[(1 << s) * width + slot] = inst.cost(start, self.slots[slot]);
                }
            }
            for mask in 1..=full {
                for (s, &(lo, hi)) in self.slot_range.iter().enumerate() {
                    if mask & (1 << s) == 0 {
                        continue;
                    }
                    for slot in lo..hi {
                        let here = dp[mask * width + slot];
                        if !here.is_finite() {
                            continue;
                        }
                        let from = self.slots[slot];
                        for (t, &(lo2, hi2)) in self.slot_range.iter().enumerate() {
                            if mask & (1 << t) != 0 {
                                continue;
                            }
                            let next = mask | (1 << t);
                            for slot2 in lo2..hi2 {
                                let v = here + inst.cost(from, self.slots[slot2]);
                                let cell = next * width + slot2;
                                if v < dp[cell] {
                                    dp[cell] = v;
                                    if reconstruct {
                                        parent[cell] = slot as u32;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            let mut local = (f64::INFINITY, 0usize);
            for slot in 0..width {
                let v = dp[full * width + slot] + inst.cost(self.slots[slot], start);
                if v < local.0 {
                    local = (v, slot);
                }
            }
            if local.0 < best.0 {
                best = (local.0, start);
                if reconstruct {
                    // the table is overwritten by the next start
                    best_path = self.trace(&parent, full, local.1);
                }
            }
        }
        let (cost, start) = best;
        if !reconstruct || !cost.is_finite() {
            return (cost, Vec::new(), Vec::new());
        }
        let mut order = vec![0];
        let mut choice = vec![0; n];
        choice[0] = inst.label(start).choice;
        for node in best_path {
            let l = inst.label(node);
            order.push(l.target);
            choice[l.target] = l.choice;
        }
        (cost, order, choice)
    }

    /// Nodes visited after the start, in order, ending at `slot`.
    fn trace(&self, parent: &[u32], mut mask: usize, mut slot: usize) -> Vec<usize> {
        let width = self.slots.len();
        let mut rev = Vec::new();
        loop {
            rev.push(self.slots[slot]);
            let target = self.inst.label(self.slots[slot]).target;
            let prev = parent[mask * width + slot];
            mask &= !(1 << (target - 1));
            if mask == 0 {
                break;
            }
            slot = prev as usize;
        }
        rev.reverse();
        rev
    }
}

/// Number of randomized constructions tried by [`solve_heuristic`].
const RESTARTS: usize = 8;

/// Feasible tour from randomized nearest-neighbor constructions, each
/// improved by 2-opt on the order and optimal node re-selection for the
/// current order until neither helps. Deterministic for a given seed.
pub fn solve_heuristic(inst: &GtspInstance, seed: u64) -> Tour {
    let n = inst.n_sets();
    if n == 1 {
        return Tour { order: vec![0], choice: vec![0], cost: 0.0 };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Tour> = None;
    for _ in 0..RESTARTS {
        let start = rng.gen_range(0..inst.n_nodes());
        let (mut order, mut choice) = nearest_neighbor(inst, start);
        let mut cost = tour_cost(inst, &order, &choice);
        loop {
            let before = cost;
            cost = two_opt(inst, &mut order, &choice, cost);
            let (c, ch) = reselect(inst, &order);
            if c < cost {
                cost = c;
                choice = ch;
            }
            if cost >= before {
                break;
            }
        }
        // rotate so the tour starts at target 0, then recompute in that order
        let at = order.iter().position(|&t| t == 0).unwrap_or(0);
        order.rotate_left(at);
        let tour = Tour::new(inst, order, choice);
        if best.as_ref().is_none_or(|b| tour.cost < b.cost) {
            best = Some(tour);
        }
    }
    best.expect("at least one restart")
}

fn nearest_neighbor(inst: &GtspInstance, start: usize) -> (Vec<usize>, Vec<usize>) {
    let n = inst.n_sets();
    let first = inst.label(start);
    let mut visited = vec![false; n];
    let mut order = vec![first.target];
    let mut choice = vec![0; n];
    visited[first.target] = true;
    choice[first.target] = first.choice;
    let mut here = start;
    for _ in 1..n {
        let mut pick = (f64::INFINITY, usize::MAX);
        for v in 0..inst.n_nodes() {
            let l = inst.label(v);
            if !visited[l.target] && (pick.1 == usize::MAX || inst.cost(here, v) < pick.0) {
                pick = (inst.cost(here, v), v);
            }
        }
        let l = inst.label(pick.1);
        visited[l.target] = true;
        choice[l.target] = l.choice;
        order.push(l.target);
        here = pick.1;
    }
    (order, choice)
}

/// First-improvement 2-opt with the node choices held fixed. Costs are
/// asymmetric, so each move is scored by re-evaluating the whole tour.
fn two_opt(inst: &GtspInstance, order: &mut [usize], choice: &[usize], mut cost: f64) -> f64 {
    let n = order.len();
    let tol = 1e-12 * cost.abs().max(1.0);
    let mut improved = true;
    while improved {
        improved = false;
        for i in 1..n - 1 {
            for j in i + 1..n {
                order[i..=j].reverse();
                let c = tour_cost(inst, order, choice);
                if c < cost - tol {
                    cost = c;
                    improved = true;
                } else {
                    order[i..=j].reverse();
                }
            }
        }
    }
    cost
}

/// Best node per target for a fixed visiting order: a shortest path through
/// the layers of sets, once per node of the first set.
fn reselect(inst: &GtspInstance, order: &[usize]) -> (f64, Vec<usize>) {
    let n = order.len();
    let mut best = (f64::INFINITY, vec![0; n]);
    let mut best_path = f64::INFINITY;
    for s in inst.set_nodes(order[0]) {
        // dist[k][v]: cheapest path from s to node v of layer k
        let mut layers: Vec<Vec<(f64, usize)>> = Vec::with_capacity(n);
        layers.push(vec![(0.0, usize::MAX)]);
        let mut prev_nodes: Vec<usize> = vec![s];
        for &t in &order[1..] {
            let nodes: Vec<usize> = inst.set_nodes(t).collect();
            let prev = layers.last().expect("non-empty");
            let layer = nodes
                .iter()
                .map(|&v| {
                    let mut m = (f64::INFINITY, 0);
                    for (pi, &u) in prev_nodes.iter().enumerate() {
                        let c = prev[pi].0 + inst.cost(u, v);
                        if c < m.0 {
                            m = (c, pi);
                        }
                    }
                    m
                })
                .collect();
            layers.push(layer);
            prev_nodes = nodes;
        }
        let last = layers.last().expect("non-empty");
        let mut end = (f64::INFINITY, 0);
        for (vi, &v) in prev_nodes.iter().enumerate() {
            let c = last[vi].0 + inst.cost(v, s);
            if c < end.0 {
                end = (c, vi);
            }
        }
        if end.0 < best_path {
            best_path = end.0;
            let mut choice = vec![0; n];
            choice[order[0]] = inst.label(s).choice;
            let mut idx = end.1;
            for k in (1..n).rev() {
                choice[order[k]] = idx;
                idx = layers[k][idx].1;
            }
            // the path sum and the tour sum round differently
            best = (tour_cost(inst, order, &choice), choice);
        }
    }
    best
}
