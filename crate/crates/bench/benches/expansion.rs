use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use potts::expansion::{default_order, optimal_expansion, run_expansion, DEFAULT_MAX_SWEEPS};
use potts::instances::{gen_grid, stereo_build, synthetic_pair, StereoParams};
use potts::Labeling;

fn bench_single_move(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimal_expansion");
    for side in [16, 32, 64] {
        let inst = gen_grid(side, side, 4, 1, (0, 10), (0, 5)).unwrap();
        let x = Labeling::constant(inst.vertex_count(), 0);
        group.bench_with_input(BenchmarkId::from_parameter(side), &inst, |b, inst| {
            b.iter(|| optimal_expansion(inst, black_box(&x), 2).unwrap())
        });
    }
    group.finish();
}

fn bench_stereo_run(c: &mut Criterion) {
    let (left, right, _) = synthetic_pair(30, 40, 5, 3, 1).unwrap();
    let inst = stereo_build(&left, &right, 5, StereoParams::default()).unwrap();
    let init = Labeling::constant(inst.vertex_count(), 0);
    c.bench_function("run_expansion/stereo_30x40_k5", |b| {
        b.iter(|| run_expansion(&inst, black_box(&init), &default_order(5), DEFAULT_MAX_SWEEPS).unwrap())
    });
}

criterion_group!(benches, bench_single_move, bench_stereo_run);
criterion_main!(benches);
