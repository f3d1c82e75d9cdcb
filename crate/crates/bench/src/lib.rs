//! Shared inputs for the benchmarks.

use std::f64::consts::TAU;

use dtsp_core::{AngleInterval, Point, TurnRadius};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One interval problem: two points, their heading intervals, the radius.
pub type IntervalCase = (Point, AngleInterval, Point, AngleInterval, TurnRadius);

/// Random interval problems in the 1000-square with ρ in [50, 200].
pub fn interval_cases(count: usize, width: f64, seed: u64) -> Vec<IntervalCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let interval = |rng: &mut ChaCha8Rng| {
        let lo = rng.gen_range(0.0..=TAU - width);
        AngleInterval::new(lo, lo + width).expect("inside [0, 2π]")
    };
    (0..count)
        .map(|_| {
            let p1 = Point::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0));
            let p2 = Point::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0));
            let i1 = interval(&mut rng);
            let i2 = interval(&mut rng);
            let rho = TurnRadius::new(rng.gen_range(50.0..200.0)).expect("positive");
            (p1, i1, p2, i2, rho)
        })
        .collect()
}
