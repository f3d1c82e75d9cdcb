mod common;

use common::{brute_atsp, brute_gtsp, brute_stsp};
use dtsp_core::gtsp::transform::{noon_bean_decode, noon_bean_encode, stsp_decode, stsp_encode};
use dtsp_core::gtsp::tsplib::TsplibMatrix;
use dtsp_core::gtsp::{
    atsp_to_stsp, build_lower_matrix, build_upper_matrix, held_karp, noon_bean, set_level_relaxation, solve_exact,
    solve_exact_with_cap, solve_heuristic, tour_cost, AtspInstance, Mode, Partition,
};
use dtsp_core::{AngleInterval, Error, GtspInstance, Point, TurnRadius};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_gtsp(rng: &mut ChaCha8Rng, n: usize, max_m: usize, integer: bool) -> GtspInstance {
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_m)).collect();
    let total: usize = sizes.iter().sum();
    let matrix = (0..total)
        .map(|_| {
            (0..total)
                .map(|_| if integer { rng.gen_range(0..50) as f64 } else { rng.gen_range(0.0..100.0) })
                .collect()
        })
        .collect();
    GtspInstance::from_matrix(Mode::Lower, &sizes, matrix).unwrap()
}

fn sets_of(inst: &GtspInstance) -> Vec<Vec<usize>> {
    (0..inst.n_sets()).map(|s| inst.set_nodes(s).collect()).collect()
}

#[test]
fn exact_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..150 {
        let (n, m) = match trial % 3 {
            0 => (rng.gen_range(2..=8), 1),
            1 => (rng.gen_range(2..=6), 4),
            _ => (rng.gen_range(2..=7), 2),
        };
        let inst = random_gtsp(&mut rng, n, m, false);
        let tour = solve_exact(&inst).unwrap();
        tour.validate(&inst).unwrap();
        let brute = brute_gtsp(&sets_of(&inst), &inst.matrix());
        assert!((tour.cost - brute).abs() <= 1e-9 * brute.max(1.0), "trial {trial}: dp {} brute {brute}", tour.cost);
        assert_eq!(tour.cost, tour_cost(&inst, &tour.order, &tour.choice));
    }
}

#[test]
fn three_single_node_sets() {
    let m = vec![vec![0.0, 1.0, 5.0], vec![2.0, 0.0, 1.0], vec![1.0, 7.0, 0.0]];
    let inst = GtspInstance::from_matrix(Mode::Upper, &[1, 1, 1], m).unwrap();
    // 0→1→2→0 costs 3, 0→2→1→0 costs 14
    assert_eq!(solve_exact(&inst).unwrap().cost, 3.0);
}

#[test]
fn symmetric_reversal_costs_the_same() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 7;
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = rng.gen_range(1.0..10.0);
            m[i][j] = c;
            m[j][i] = c;
        }
    }
    let inst = GtspInstance::from_matrix(Mode::Upper, &[1; 7], m).unwrap();
    let t = solve_exact(&inst).unwrap();
    let mut rev = t.order.clone();
    rev[1..].reverse();
    assert!((tour_cost(&inst, &rev, &t.choice) - t.cost).abs() < 1e-12);
}

#[test]
fn cap_is_enforced() {
    let inst = GtspInstance::from_matrix(Mode::Upper, &[1; 5], vec![vec![1.0; 5]; 5]).unwrap();
    assert!(matches!(solve_exact_with_cap(&inst, 4), Err(Error::CapExceeded { .. })));
}

#[test]
fn heuristic_and_relaxation_sandwich_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..100 {
        let n = rng.gen_range(2..=8);
        let inst = random_gtsp(&mut rng, n, 3, false);
        let exact = solve_exact(&inst).unwrap().cost;
        let relax = set_level_relaxation(&inst).unwrap();
        let heur = solve_heuristic(&inst, trial);
        heur.validate(&inst).unwrap();
        assert!(relax <= exact + 1e-9, "relaxation {relax} above exact {exact}");
        assert!(heur.cost >= exact - 1e-9, "heuristic {} below exact {exact}", heur.cost);
        assert_eq!(heur, solve_heuristic(&inst, trial), "heuristic is not deterministic");
    }
}

#[test]
fn relaxation_is_tight_for_singletons_and_two_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let inst = random_gtsp(&mut rng, 6, 1, false);
    assert_eq!(set_level_relaxation(&inst).unwrap(), solve_exact(&inst).unwrap().cost);

    let inst = random_gtsp(&mut rng, 2, 3, false);
    let (a, b): (Vec<usize>, Vec<usize>) = (inst.set_nodes(0).collect(), inst.set_nodes(1).collect());
    let there = a.iter().flat_map(|&u| b.iter().map(move |&v| (u, v))).map(|(u, v)| inst.cost(u, v)).fold(f64::INFINITY, f64::min);
    let back = b.iter().flat_map(|&u| a.iter().map(move |&v| (u, v))).map(|(u, v)| inst.cost(u, v)).fold(f64::INFINITY, f64::min);
    assert_eq!(set_level_relaxation(&inst).unwrap(), there + back);
}

#[test]
fn noon_bean_preserves_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..500 {
        let n = rng.gen_range(2..=5);
        let inst = random_gtsp(&mut rng, n, 3, true);
        let atsp = noon_bean(&inst).unwrap();
        let (atsp_opt, atsp_tour) = held_karp(&atsp.matrix(), 22).unwrap();
        let gtsp_opt = brute_gtsp(&sets_of(&inst), &inst.matrix());
        assert_eq!(atsp_opt - n as f64 * atsp.shift, gtsp_opt, "trial {trial}");
        let decoded = noon_bean_decode(&inst, &atsp, &atsp_tour).unwrap();
        assert_eq!(decoded.cost, gtsp_opt, "trial {trial}: decoded tour");
        let exact = solve_exact(&inst).unwrap();
        let encoded = noon_bean_encode(&atsp, &exact);
        assert_eq!(atsp.tour_cost(&encoded) - n as f64 * atsp.shift, exact.cost);
        assert_eq!(noon_bean_decode(&inst, &atsp, &encoded).unwrap().cost, exact.cost);
    }
}

#[test]
fn noon_bean_on_singleton_sets_only_shifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let inst = random_gtsp(&mut rng, 5, 1, true);
    let atsp = noon_bean(&inst).unwrap();
    for u in 0..5 {
        for v in 0..5 {
            if u != v {
                assert_eq!(atsp.cost(u, v), inst.cost(u, v) + atsp.shift);
            }
        }
    }
}

#[test]
fn three_node_split_preserves_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..500 {
        let n = rng.gen_range(2..=6);
        let symmetric = trial % 4 == 0;
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m[i][j] = if symmetric && j < i { m[j][i] } else { rng.gen_range(0..100) as f64 };
                }
            }
        }
        let atsp = AtspInstance::from_matrix(&m, Mode::Lower);
        let stsp = atsp_to_stsp(&atsp);
        assert_eq!(stsp.n, 3 * atsp.n);
        let a = brute_atsp(&m);
        let s = brute_stsp(&stsp.matrix());
        assert_eq!(a, s, "trial {trial}");
        let (_, tour) = held_karp(&m, 22).unwrap();
        let lifted = stsp_encode(&tour);
        assert_eq!(stsp.tour_cost(&lifted), atsp.tour_cost(&tour));
        let mut reversed = lifted.clone();
        reversed.reverse();
        assert_eq!(stsp_decode(&reversed).unwrap().len(), n);
        assert_eq!(atsp.tour_cost(&stsp_decode(&reversed).unwrap()), a);
    }
}

#[test]
fn tsplib_round_trip_and_floor_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 6;
    let m: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0.0..50.0)).collect()).collect();
    let atsp = AtspInstance::from_matrix(&m, Mode::Lower);
    let scale = 10.0;
    let file = TsplibMatrix::from_atsp("t", &atsp, scale).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.atsp");
    file.write(&path).unwrap();
    let back = TsplibMatrix::read(&path).unwrap();
    assert_eq!(back, file);

    let ints: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { back.weight(i, j) as f64 }).collect())
        .collect();
    assert!(brute_atsp(&ints) / scale <= brute_atsp(&m));

    let upper = TsplibMatrix::from_atsp("u", &AtspInstance::from_matrix(&m, Mode::Upper), scale).unwrap();
    let ints: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { upper.weight(i, j) as f64 }).collect())
        .collect();
    assert!(brute_atsp(&ints) / scale >= brute_atsp(&m));
}

#[test]
fn partition_validation_names_the_target() {
    let good = Partition::uniform(4).unwrap();
    let gap = Partition::new(vec![AngleInterval::new(0.0, 1.0).unwrap(), AngleInterval::new(1.5, std::f64::consts::TAU).unwrap()]);
    let overlap = Partition::new(vec![AngleInterval::new(0.0, 2.0).unwrap(), AngleInterval::new(1.5, std::f64::consts::TAU).unwrap()]);
    let pts = [Point::new(0.0, 0.0), Point::new(300.0, 0.0)];
    let rho = TurnRadius::new(100.0).unwrap();
    for bad in [gap, overlap] {
        match build_lower_matrix(&pts, &[good.clone(), bad], rho) {
            Err(Error::InvalidPartition { target, .. }) => assert_eq!(target, 1),
            other => panic!("expected a partition error, got {other:?}"),
        }
    }
}

#[test]
fn single_interval_gives_euclidean_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pts: Vec<Point> = (0..5).map(|_| Point::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0))).collect();
    let rho = TurnRadius::new(100.0).unwrap();
    let inst = build_lower_matrix(&pts, &vec![Partition::uniform(1).unwrap(); 5], rho).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            if i != j {
                assert_eq!(inst.cost(i, j), pts[i].distance(&pts[j]));
            }
        }
    }
}

#[test]
fn refinement_and_upper_matrix_dominate() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let pts: Vec<Point> = (0..4).map(|_| Point::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0))).collect();
    let rho = TurnRadius::new(100.0).unwrap();
    let coarse = build_lower_matrix(&pts, &vec![Partition::uniform(4).unwrap(); 4], rho).unwrap();
    let fine = build_lower_matrix(&pts, &vec![Partition::uniform(8).unwrap(); 4], rho).unwrap();
    let headings: Vec<Vec<f64>> = vec![(0..8).map(|j| std::f64::consts::TAU * j as f64 / 8.0).collect(); 4];
    let upper = build_upper_matrix(&pts, &headings, rho).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            for a in 0..8 {
                for b in 0..8 {
                    let f = fine.leg((i, a), (j, b));
                    assert!(f >= coarse.leg((i, a / 2), (j, b / 2)) - 1e-9);
                    // heading 2πa/8 is the lower end of fine interval a
                    assert!(upper.leg((i, a), (j, b)) >= f - 1e-9);
                }
            }
        }
    }
}
