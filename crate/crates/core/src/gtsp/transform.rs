//! GTSP → ATSP (Noon–Bean) and ATSP → symmetric TSP (3n node splitting).
//!
//! Excluded arcs are stored as `f64::INFINITY`; they only become a large
//! finite number when written to a TSPLIB file.

use serde::{Deserialize, Serialize};

use super::{GtspInstance, Mode, Tour};
use crate::error::{Error, Result};

/// Asymmetric TSP with a dense cost matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtspInstance {
    pub n: usize,
    /// Row-major, `f64::INFINITY` for excluded arcs.
    pub cost: Vec<f64>,
    /// Constant added to every inter-set arc; a tour over `k` sets pays it
    /// `k` times.
    pub shift: f64,
    pub mode: Mode,
    /// Node indices of each original set, in cycle order.
    pub sets: Vec<Vec<usize>>,
}

impl AtspInstance {
    /// Plain ATSP from a matrix: singleton sets, no shift.
    pub fn from_matrix(matrix: &[Vec<f64>], mode: Mode) -> Self {
        let n = matrix.len();
        let mut cost = Vec::with_capacity(n * n);
        for (i, row) in matrix.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                cost.push(if i == j { f64::INFINITY } else { c });
            }
        }
        Self {
            n,
            cost,
            shift: 0.0,
            mode,
            sets: (0..n).map(|i| vec![i]).collect(),
        }
    }

    #[inline]
    pub fn cost(&self, from: usize, to: usize) -> f64 {
        self.cost[from * self.n + to]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.cost.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Cost of the cyclic node sequence `tour`.
    pub fn tour_cost(&self, tour: &[usize]) -> f64 {
        let n = tour.len();
        (0..n).map(|i| self.cost(tour[i], tour[(i + 1) % n])).sum()
    }
}

/// Symmetric TSP produced by [`atsp_to_stsp`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StspInstance {
    pub n: usize,
    /// Row-major symmetric matrix, `f64::INFINITY` for excluded edges.
    pub cost: Vec<f64>,
    /// Shift inherited from the ATSP.
    pub shift: f64,
    pub mode: Mode,
}

impl StspInstance {
    #[inline]
    pub fn cost(&self, a: usize, b: usize) -> f64 {
        self.cost[a * self.n + b]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.cost.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn tour_cost(&self, tour: &[usize]) -> f64 {
        let n = tour.len();
        (0..n).map(|i| self.cost(tour[i], tour[(i + 1) % n])).sum()
    }
}

/// Noon–Bean transformation.
///
/// The nodes of each set are linked into a zero-cost cycle in ascending
/// choice order, and every inter-set arc `u → w` is moved to leave from the
/// cycle predecessor of `u`, with `shift = (sum of inter-set costs) + 1`
/// added. An optimal ATSP tour then enters each set at some node `u`, runs
/// round its cycle and leaves from `pred(u)` paying `c(u, w) + shift`, so it
/// selects `u` and costs the GTSP tour plus `sets × shift`.
pub fn noon_bean(inst: &GtspInstance) -> Result<AtspInstance> {
    let n = inst.n_nodes();
    let mut total = 0.0;
    for u in 0..n {
        for v in 0..n {
            if inst.label(u).target != inst.label(v).target {
                let c = inst.cost(u, v);
                if !c.is_finite() {
                    return Err(Error::Invalid(format!("inter-set cost from node {u} to node {v} is not finite")));
                }
                total += c;
            }
        }
    }
    let shift = total + 1.0;
    let sets: Vec<Vec<usize>> = (0..inst.n_sets()).map(|s| inst.set_nodes(s).collect()).collect();
    let mut pred = vec![0; n];
    let mut cost = vec![f64::INFINITY; n * n];
    for nodes in &sets {
        let k = nodes.len();
        for (t, &u) in nodes.iter().enumerate() {
            pred[u] = nodes[(t + k - 1) % k];
            if k > 1 {
                cost[u * n + nodes[(t + 1) % k]] = 0.0;
            }
        }
    }
    for u in 0..n {
        for w in 0..n {
            if inst.label(u).target != inst.label(w).target {
                cost[pred[u] * n + w] = inst.cost(u, w) + shift;
            }
        }
    }
    Ok(AtspInstance {
        n,
        cost,
        shift,
        mode: inst.mode(),
        sets,
    })
}

/// ATSP node sequence that realizes `tour` after [`noon_bean`].
pub fn noon_bean_encode(atsp: &AtspInstance, tour: &Tour) -> Vec<usize> {
    let mut out = Vec::with_capacity(atsp.n);
    for &t in &tour.order {
        let nodes = &atsp.sets[t];
        let k = nodes.len();
        let entry = tour.choice[t];
        out.extend((0..k).map(|i| nodes[(entry + i) % k]));
    }
    out
}

/// Reads the GTSP tour back from an ATSP tour: each set must be visited as
/// one contiguous block, and the node where the block starts is the choice.
pub fn noon_bean_decode(inst: &GtspInstance, atsp: &AtspInstance, tour: &[usize]) -> Result<Tour> {
    if tour.len() != atsp.n {
        return Err(Error::Invalid(format!("ATSP tour has {} nodes, expected {}", tour.len(), atsp.n)));
    }
    let owner = |v: usize| inst.label(v).target;
    // rotate so that the sequence starts at the beginning of a block
    let n = tour.len();
    let start = (0..n).find(|&i| owner(tour[i]) != owner(tour[(i + n - 1) % n])).unwrap_or(0);
    let mut order = Vec::new();
    let mut choice = vec![usize::MAX; inst.n_sets()];
    for i in 0..n {
        let v = tour[(start + i) % n];
        let prev = tour[(start + i + n - 1) % n];
        if i == 0 || owner(v) != owner(prev) {
            let t = owner(v);
            if choice[t] != usize::MAX {
                return Err(Error::Invalid(format!("set {t} is entered twice")));
            }
            choice[t] = inst.label(v).choice;
            order.push(t);
        }
    }
    if order.len() == 1 && inst.n_sets() > 1 {
        return Err(Error::Invalid("tour does not visit every set".into()));
    }
    let at = order.iter().position(|&t| t == 0).unwrap_or(0);
    order.rotate_left(at);
    let out = Tour::new(inst, order, choice);
    out.validate(inst)?;
    Ok(out)
}

/// 3n transformation: ATSP node `i` becomes the chain `3i – 3i+1 – 3i+2`
/// joined by zero-cost edges, and the edge `{3i+2, 3j}` carries `c(i, j)`.
/// The middle node has no other edge, so every finite Hamiltonian cycle
/// walks the chains and reads as a directed ATSP tour. No large constant is
/// needed; all other pairs are excluded.
pub fn atsp_to_stsp(atsp: &AtspInstance) -> StspInstance {
    let n = 3 * atsp.n;
    let mut cost = vec![f64::INFINITY; n * n];
    let mut set = |a: usize, b: usize, c: f64| {
        cost[a * n + b] = c;
        cost[b * n + a] = c;
    };
    for i in 0..atsp.n {
        set(3 * i, 3 * i + 1, 0.0);
        set(3 * i + 1, 3 * i + 2, 0.0);
        for j in 0..atsp.n {
            let c = atsp.cost(i, j);
            if i != j && c.is_finite() {
                set(3 * i + 2, 3 * j, c);
            }
        }
    }
    StspInstance {
        n,
        cost,
        shift: atsp.shift,
        mode: atsp.mode,
    }
}

/// STSP tour for an ATSP tour.
pub fn stsp_encode(tour: &[usize]) -> Vec<usize> {
    tour.iter().flat_map(|&i| [3 * i, 3 * i + 1, 3 * i + 2]).collect()
}

/// ATSP tour from an STSP tour that uses only chain and transformed edges,
/// read in whichever direction runs each chain first-to-last.
pub fn stsp_decode(tour: &[usize]) -> Result<Vec<usize>> {
    let n = tour.len();
    if !n.is_multiple_of(3) || n == 0 {
        return Err(Error::Invalid(format!("STSP tour length {n} is not a positive multiple of 3")));
    }
    let start = tour.iter().position(|&v| v % 3 == 0).expect("non-empty");
    let forward = tour[(start + 1) % n] == tour[start] + 1;
    let step = |k: usize| {
        if forward {
            tour[(start + k) % n]
        } else {
            tour[(start + n - k) % n]
        }
    };
    let mut out = Vec::with_capacity(n / 3);
    for c in 0..n / 3 {
        let (a, b, d) = (step(3 * c), step(3 * c + 1), step(3 * c + 2));
        if a % 3 != 0 || b != a + 1 || d != a + 2 {
            return Err(Error::Invalid(format!("chain of node {} is broken in the STSP tour", a / 3)));
        }
        out.push(a / 3);
    }
    Ok(out)
}
