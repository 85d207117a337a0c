use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lowss::{solve_bellman, solve_det, solve_kane_det, solve_rand, solve_tradeoff, RandConfig, SeedPack, TradeoffConfig};
use lowss_bench::{planted, unplanted};

fn exact_solvers(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    g.sample_size(10);
    for t in [256u64, 1024] {
        let inst = planted(16, t, 1);
        g.bench_with_input(BenchmarkId::new("bellman", t), &inst, |b, i| b.iter(|| solve_bellman(i).unwrap()));
        g.bench_with_input(BenchmarkId::new("kane-det", t), &inst, |b, i| b.iter(|| solve_kane_det(i).unwrap()));
        g.bench_with_input(BenchmarkId::new("det-star", t), &inst, |b, i| b.iter(|| solve_det(i).unwrap()));
        let no = unplanted(16, t, 1);
        g.bench_with_input(BenchmarkId::new("det-star-no", t), &no, |b, i| b.iter(|| solve_det(i).unwrap()));
    }
    g.finish();
}

fn randomized_solvers(c: &mut Criterion) {
    let mut g = c.benchmark_group("randomized");
    g.sample_size(10);
    let seeds = SeedPack::new(5);
    for t in [512u64, 1024] {
        let inst = planted(32, t, 2);
        g.bench_with_input(BenchmarkId::new("rand-loglog", t), &inst, |b, i| {
            b.iter(|| solve_rand(i, &RandConfig::default(), &seeds).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("rand-eps", t), &inst, |b, i| {
            b.iter(|| solve_rand(i, &RandConfig::const_depth(1, 2), &seeds).unwrap())
        });
    }
    let inst = planted(16, 256, 3);
    for k in [1u64, 4, 8] {
        g.bench_with_input(BenchmarkId::new("tradeoff", k), &inst, |b, i| {
            b.iter(|| solve_tradeoff(i, &TradeoffConfig::new(k), &seeds).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, exact_solvers, randomized_solvers);
criterion_main!(benches);
