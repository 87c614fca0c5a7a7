use std::hint::black_box;

use altmin::batch::{par_map, seq_map};
use altmin::zoo::{make_quadratic, QuadraticSplitProblem};
use altmin::{run_aam, run_am, BlockObjective, SolverConfig};
use criterion::{criterion_group, criterion_main, Criterion};

fn suite() -> Vec<QuadraticSplitProblem> {
    (0..16)
        .map(|seed| make_quadratic(seed, 32, 1e3, 2).expect("valid instance"))
        .collect()
}

fn solve(p: &QuadraticSplitProblem) -> f64 {
    let cfg = SolverConfig {
        max_iters: 100,
        ..SolverConfig::default()
    };
    let x0 = vec![0.0; p.partition().total_dim()];
    let am = run_am(p, &x0, &cfg).expect("am runs");
    let aam = run_aam(p, &x0, &cfg).expect("aam runs");
    am.last().f_value + aam.last().f_value
}

fn batch(c: &mut Criterion) {
    let problems = suite();
    let mut g = c.benchmark_group("solver_batch");
    g.sample_size(20);
    g.bench_function("sequential", |b| b.iter(|| seq_map(black_box(&problems), solve)));
    g.bench_function("parallel", |b| b.iter(|| par_map(black_box(&problems), solve)));
    g.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
