//! Self-checks runnable from the command line: the interval solver against
//! the dense grid oracle, and the GTSP transformations against exhaustive
//! enumeration. Every row records the computed value, the reference it was
//! checked against, and the verdict.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angle::AngleInterval;
use crate::dubins::{dubins_shortest, Configuration, Point, TurnRadius};
use crate::gtsp::transform::AtspInstance;
use crate::gtsp::{atsp_to_stsp, held_karp, noon_bean, GtspInstance, Mode};
use crate::interval::{grid_oracle, solve_interval};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub suite: String,
    pub case: usize,
    pub value: f64,
    pub reference: f64,
    pub pass: bool,
}

pub const VERIFY_HEADER: [&str; 5] = ["suite", "case", "value", "reference", "pass"];

fn random_interval(rng: &mut ChaCha8Rng) -> AngleInterval {
    let w = match rng.gen_range(0..4) {
        0 => 0.0,
        1 => TAU,
        _ => rng.gen_range(0.0..TAU),
    };
    let lo = rng.gen_range(0.0..=TAU - w);
    AngleInterval::new(lo, lo + w).expect("constructed inside [0, 2π]")
}

/// `samples` random interval problems (ρ in [50, 200], points in the
/// 1000-square). A case passes when the solver's value is attained at its
/// returned headings and does not exceed the grid minimum, both within 1e-9.
pub fn interval_suite(samples: usize, n_grid: usize, seed: u64) -> Vec<VerifyRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|case| {
            let rho = TurnRadius::new(rng.gen_range(50.0..200.0)).expect("positive");
            let p1 = Point::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0));
            let p2 = Point::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0));
            let (i1, i2) = (random_interval(&mut rng), random_interval(&mut rng));
            let sol = solve_interval(p1, &i1, p2, &i2, rho);
            let at = dubins_shortest(&Configuration::at(p1, sol.theta1), &Configuration::at(p2, sol.theta2), rho).total;
            let grid = grid_oracle(p1, &i1, p2, &i2, rho, n_grid);
            let pass = (at - sol.value).abs() <= 1e-9
                && i1.contains(sol.theta1)
                && i2.contains(sol.theta2)
                && sol.value <= grid + 1e-9;
            VerifyRow {
                suite: "interval_vs_grid".into(),
                case,
                value: sol.value,
                reference: grid,
                pass,
            }
        })
        .collect()
}

/// Noon–Bean on random integer GTSPs (up to 5 sets of up to 3 nodes) and the
/// 3n split on random integer ATSPs (up to 6 nodes); optima must agree
/// exactly with enumeration.
pub fn transformation_suite(trials: usize, seed: u64) -> Vec<VerifyRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(2 * trials);
    for case in 0..trials {
        let n = rng.gen_range(2..=5);
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let total: usize = sizes.iter().sum();
        let matrix: Vec<Vec<f64>> = (0..total)
            .map(|_| (0..total).map(|_| rng.gen_range(0..100) as f64).collect())
            .collect();
        let gtsp = GtspInstance::from_matrix(Mode::Lower, &sizes, matrix).expect("well-formed");
        let atsp = noon_bean(&gtsp).expect("finite costs");
        let (opt, _) = held_karp(&atsp.matrix(), 22).expect("within cap");
        let value = opt - n as f64 * atsp.shift;
        let reference = enumerate_gtsp(&gtsp);
        rows.push(VerifyRow {
            suite: "noon_bean".into(),
            case,
            value,
            reference,
            pass: value == reference,
        });
    }
    for case in 0..trials {
        let n = rng.gen_range(2..=6);
        let m: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { rng.gen_range(0..100) as f64 }).collect())
            .collect();
        let atsp = AtspInstance::from_matrix(&m, Mode::Lower);
        let stsp = atsp_to_stsp(&atsp);
        let value = enumerate_cycles(&stsp.matrix());
        let reference = enumerate_gtsp(&GtspInstance::from_matrix(Mode::Lower, &vec![1; n], m).expect("well-formed"));
        rows.push(VerifyRow {
            suite: "three_node_split".into(),
            case,
            value,
            reference,
            pass: value == reference && stsp.n == 3 * n,
        });
    }
    rows
}

/// Optimal GTSP cost over every order (set 0 first) and node choice.
pub fn enumerate_gtsp(inst: &GtspInstance) -> f64 {
    fn go(inst: &GtspInstance, first: usize, here: usize, used: &mut [bool], left: usize, acc: f64, best: &mut f64) {
        if left == 0 {
            *best = best.min(acc + inst.cost(here, first));
            return;
        }
        for s in 1..inst.n_sets() {
            if used[s] {
                continue;
            }
            used[s] = true;
            for v in inst.set_nodes(s) {
                go(inst, first, v, used, left - 1, acc + inst.cost(here, v), best);
            }
            used[s] = false;
        }
    }
    let n = inst.n_sets();
    if n == 1 {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    let mut used = vec![false; n];
    used[0] = true;
    for s in inst.set_nodes(0) {
        go(inst, s, s, &mut used, n - 1, 0.0, &mut best);
    }
    best
}

/// Optimal Hamiltonian cycle through finite edges of a symmetric matrix.
pub fn enumerate_cycles(cost: &[Vec<f64>]) -> f64 {
    fn go(cost: &[Vec<f64>], here: usize, used: &mut [bool], left: usize, acc: f64, best: &mut f64) {
        if left == 0 {
            *best = best.min(acc + cost[here][0]);
            return;
        }
        for v in 1..cost.len() {
            if !used[v] && cost[here][v].is_finite() {
                used[v] = true;
                go(cost, v, used, left - 1, acc + cost[here][v], best);
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; cost.len()];
    used[0] = true;
    let mut best = f64::INFINITY;
    go(cost, 0, &mut used, cost.len() - 1, 0.0, &mut best);
    best
}
