use std::f64::consts::{PI, TAU};

use dtsp_core::dubins::{pose_error, simulate_word};
use dtsp_core::gtsp::{set_level_relaxation, solve_exact, solve_heuristic};
use dtsp_core::interval::two_segment::rs_from_departure;
use dtsp_core::{dubins_shortest, solve_interval, AngleInterval, Configuration, GtspInstance, Mode, Partition, Point, TurnRadius};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -500.0..500.0
}

fn pose() -> impl Strategy<Value = Configuration> {
    (coord(), coord(), 0.0..TAU).prop_map(|(x, y, t)| Configuration::new(x, y, t))
}

fn radius() -> impl Strategy<Value = TurnRadius> {
    (10.0..200.0).prop_map(|r: f64| TurnRadius::new(r).unwrap())
}

fn interval() -> impl Strategy<Value = AngleInterval> {
    (0.0..TAU, prop_oneof![Just(0.0), Just(1.0), 0.0..1.0]).prop_map(|(lo, frac): (f64, f64)| {
        let hi = lo + frac * (TAU - lo);
        AngleInterval::new(lo, hi).unwrap()
    })
}

/// A sub-interval of `iv`.
fn shrink(iv: &AngleInterval, a: f64, b: f64) -> AngleInterval {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    AngleInterval::new(iv.lo() + a * iv.width(), iv.lo() + b * iv.width()).unwrap()
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn shortest_path_closes_and_beats_the_crow(a in pose(), b in pose(), rho in radius()) {
        let p = dubins_shortest(&a, &b, rho);
        prop_assert!(p.total >= a.position().distance(&b.position()) - 1e-9);
        let end = simulate_word(&a, rho, p.word, p.seg_lengths);
        prop_assert!(pose_error(&end, &b, rho) < 1e-6);
        prop_assert!(close(p.seg_lengths.iter().sum::<f64>(), p.total, p.total));
    }

    #[test]
    fn shortest_path_mirror_and_reversal(a in pose(), b in pose(), rho in radius()) {
        let d = dubins_shortest(&a, &b, rho).total;
        let mirror = |c: &Configuration| Configuration::new(c.x, -c.y, -c.theta);
        prop_assert!(close(dubins_shortest(&mirror(&a), &mirror(&b), rho).total, d, d));
        let back = |c: &Configuration| Configuration::new(c.x, c.y, c.theta + PI);
        prop_assert!(close(dubins_shortest(&back(&b), &back(&a), rho).total, d, d));
    }

    #[test]
    fn shortest_path_rigid_motion_and_scaling(
        a in pose(), b in pose(), rho in radius(),
        rot in 0.0..TAU, dx in coord(), dy in coord(), k in 0.1..10.0f64,
    ) {
        let d = dubins_shortest(&a, &b, rho).total;
        let (s, c) = rot.sin_cos();
        let mv = |q: &Configuration| Configuration::new(c * q.x - s * q.y + dx, s * q.x + c * q.y + dy, q.theta + rot);
        // a rotation can move a pose across a word's existence boundary by one ulp
        prop_assert!((dubins_shortest(&mv(&a), &mv(&b), rho).total - d).abs() <= 1e-7 * d.max(1.0));
        let sc = |q: &Configuration| Configuration::new(k * q.x, k * q.y, q.theta);
        let scaled = dubins_shortest(&sc(&a), &sc(&b), TurnRadius::new(k * rho.get()).unwrap()).total;
        prop_assert!((scaled - k * d).abs() <= 1e-7 * (k * d).max(1.0));
    }

    #[test]
    fn full_circles_give_the_euclidean_distance(x1 in coord(), y1 in coord(), x2 in coord(), y2 in coord(), rho in radius()) {
        let (p1, p2) = (Point::new(x1, y1), Point::new(x2, y2));
        let full = AngleInterval::full();
        prop_assert_eq!(solve_interval(p1, &full, p2, &full, rho).value, p1.distance(&p2));
    }

    #[test]
    fn single_headings_reduce_to_the_shortest_path(a in pose(), b in pose(), rho in radius()) {
        let i1 = AngleInterval::point(a.theta);
        let i2 = AngleInterval::point(b.theta);
        let sol = solve_interval(a.position(), &i1, b.position(), &i2, rho);
        let d = dubins_shortest(&a, &b, rho).total;
        prop_assert!((sol.value - d).abs() <= 1e-9 * d.max(1.0), "{} vs {d}", sol.value);
    }

    #[test]
    fn solution_is_achieved_inside_the_intervals(
        x1 in coord(), y1 in coord(), x2 in coord(), y2 in coord(), rho in radius(),
        i1 in interval(), i2 in interval(),
    ) {
        let (p1, p2) = (Point::new(x1, y1), Point::new(x2, y2));
        let sol = solve_interval(p1, &i1, p2, &i2, rho);
        prop_assert!(i1.contains(sol.theta1) && i2.contains(sol.theta2));
        let d = dubins_shortest(&Configuration::at(p1, sol.theta1), &Configuration::at(p2, sol.theta2), rho).total;
        prop_assert!((d - sol.value).abs() <= 1e-9);
        for c in &sol.all_candidates {
            prop_assert!(sol.value <= c.value);
        }
    }

    #[test]
    fn shrinking_intervals_never_helps(
        x1 in coord(), y1 in coord(), x2 in coord(), y2 in coord(), rho in radius(),
        i1 in interval(), i2 in interval(),
        a in 0.0..1.0, b in 0.0..1.0, c in 0.0..1.0, d in 0.0..1.0,
    ) {
        let (p1, p2) = (Point::new(x1, y1), Point::new(x2, y2));
        let wide = solve_interval(p1, &i1, p2, &i2, rho).value;
        let narrow = solve_interval(p1, &shrink(&i1, a, b), p2, &shrink(&i2, c, d), rho).value;
        prop_assert!(narrow >= wide - 1e-9, "narrow {narrow} below wide {wide}");
    }

    #[test]
    fn heuristic_is_never_below_the_relaxation(
        sizes in prop::collection::vec(1usize..4, 2..7),
        seed in any::<u64>(),
        weights in prop::collection::vec(0.0..100.0f64, 400),
    ) {
        let total: usize = sizes.iter().sum();
        let matrix: Vec<Vec<f64>> = (0..total)
            .map(|i| (0..total).map(|j| weights[(i * total + j) % weights.len()]).collect())
            .collect();
        let inst = GtspInstance::from_matrix(Mode::Lower, &sizes, matrix).unwrap();
        let relaxed = set_level_relaxation(&inst).unwrap();
        let exact = solve_exact(&inst).unwrap().cost;
        let heuristic = solve_heuristic(&inst, seed).cost;
        prop_assert!(relaxed <= exact + 1e-9);
        prop_assert!(exact <= heuristic + 1e-9);
        prop_assert!(heuristic >= relaxed - 1e-9);
    }

    #[test]
    fn uniform_partitions_are_nested(m in 1usize..64) {
        let coarse = Partition::uniform(m).unwrap();
        let fine = Partition::uniform(2 * m).unwrap();
        for (k, iv) in coarse.intervals.iter().enumerate() {
            prop_assert_eq!(iv.lo(), fine.intervals[2 * k].lo());
            prop_assert_eq!(fine.intervals[2 * k].hi(), fine.intervals[2 * k + 1].lo());
            prop_assert_eq!(iv.hi(), fine.intervals[2 * k + 1].hi());
        }
        prop_assert_eq!(coarse.intervals[0].lo(), 0.0);
        prop_assert_eq!(coarse.intervals[m - 1].hi(), TAU);
    }
}

/// The arrival heading of the RS path is extremal in the departure heading
/// exactly where `cos φ = L / x̄`.
#[test]
fn rs_arrival_heading_extremum() {
    let rho = TurnRadius::new(1.0).unwrap();
    let mut found = 0;
    for &xbar in &[0.5, 1.5, 2.5, 3.0, 5.0, 9.0] {
        let phi = |t: f64| rs_from_departure(xbar, t, rho).map(|g| g.phi);
        // φ is continuous wherever it stays away from the 0/2π seam
        let slope = |t: f64| match (phi(t + 1e-7), phi(t - 1e-7)) {
            (Some(a), Some(b)) if (a - b).abs() < 1.0 => Some(a - b),
            _ => None,
        };
        let n = 20_000;
        for k in 0..n {
            let (mut lo, mut hi) = (TAU * k as f64 / n as f64, TAU * (k + 1) as f64 / n as f64);
            let (Some(a), Some(b)) = (slope(lo), slope(hi)) else { continue };
            if a == 0.0 || a.signum() == b.signum() {
                continue;
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                match slope(mid) {
                    Some(s) if s.signum() == a.signum() => lo = mid,
                    _ => hi = mid,
                }
            }
            let g = rs_from_departure(xbar, lo, rho).unwrap();
            if g.straight_len < 1e-6 {
                continue;
            }
            found += 1;
            let residual = g.phi.cos() - g.straight_len / xbar;
            assert!(residual.abs() < 1e-6, "xbar {xbar} θ1 {lo}: cos φ − L/x̄ = {residual}");
        }
    }
    assert!(found >= 4, "only {found} extrema located");
}
