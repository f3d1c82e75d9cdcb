use std::f64::consts::{FRAC_PI_2, TAU};
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dtsp_bench::interval_cases;
use dtsp_core::interval::grid_oracle;
use dtsp_core::{dubins_shortest, solve_interval, Configuration};

fn shortest(c: &mut Criterion) {
    let cases = interval_cases(256, 0.0, 1);
    c.bench_function("dubins_shortest/256", |b| {
        b.iter(|| {
            for (p1, i1, p2, i2, rho) in &cases {
                black_box(dubins_shortest(&Configuration::at(*p1, i1.lo()), &Configuration::at(*p2, i2.lo()), *rho));
            }
        })
    });
}

fn interval(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_interval/256");
    for (label, width) in [("point", 0.0), ("quarter", FRAC_PI_2), ("full", TAU)] {
        let cases = interval_cases(256, width, 2);
        g.bench_with_input(BenchmarkId::from_parameter(label), &cases, |b, cases| {
            b.iter(|| {
                for (p1, i1, p2, i2, rho) in cases {
                    black_box(solve_interval(*p1, i1, *p2, i2, *rho));
                }
            })
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let cases = interval_cases(4, FRAC_PI_2, 3);
    let mut g = c.benchmark_group("grid_oracle");
    g.sample_size(10);
    for n in [256, 1024] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                for (p1, i1, p2, i2, rho) in &cases {
                    black_box(grid_oracle(*p1, i1, *p2, i2, *rho, n));
                }
            })
        });
    }
    g.finish();
}

criterion_group!(benches, shortest, interval, oracle);
criterion_main!(benches);
