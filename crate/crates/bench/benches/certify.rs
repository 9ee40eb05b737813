use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use potts::certify::{make_hamming_objective, naive_bound, solve_certified_bound, CertifyOptions};
use potts::instances::gen_grid;
use potts::locallp::{build_system, solve_primal_dual};
use potts::oracle::{brute_map, verify_main_theorem, DEFAULT_BUDGET};
use potts::Rational;

fn bench_local_lp(c: &mut Criterion) {
    let inst = gen_grid(3, 3, 3, 4, (0, 10), (0, 5)).unwrap();
    let system = build_system(&inst);
    let exact = inst.objective_vector::<Rational>();
    let float = inst.objective_vector::<f64>();
    c.bench_function("local_lp/exact_3x3_k3", |b| b.iter(|| solve_primal_dual(&system, black_box(&exact)).unwrap()));
    c.bench_function("local_lp/float_3x3_k3", |b| b.iter(|| solve_primal_dual(&system, black_box(&float)).unwrap()));
}

fn bench_theorem_check(c: &mut Criterion) {
    let inst = gen_grid(2, 3, 3, 11, (0, 10), (0, 5)).unwrap();
    c.bench_function("verify_main_theorem/2x3_k3", |b| b.iter(|| verify_main_theorem(black_box(&inst), DEFAULT_BUDGET).unwrap()));
}

fn bench_bounds(c: &mut Criterion) {
    let inst = gen_grid(3, 3, 3, 2, (0, 10), (0, 5)).unwrap();
    let (x, _) = brute_map(&inst, DEFAULT_BUDGET).unwrap();
    let f = make_hamming_objective(&inst, &x).unwrap();
    let mut group = c.benchmark_group("bounds_3x3_k3");
    group.sample_size(10);
    group.bench_function("certified", |b| b.iter(|| solve_certified_bound(&inst, black_box(&f), &CertifyOptions::default()).unwrap()));
    group.bench_function("naive", |b| b.iter(|| naive_bound(&inst, black_box(&x), &f, DEFAULT_BUDGET).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_local_lp, bench_theorem_check, bench_bounds);
criterion_main!(benches);
