use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lagrangian_bench::{planes, random_loop, torus};
use lagrangian_core::hormander::index_of;
use lagrangian_core::maslov_index;
use lagrangian_core::surface::analyze;

fn maslov(c: &mut Criterion) {
    let mut group = c.benchmark_group("maslov_index");
    for m in [64, 256, 1024] {
        let lp = random_loop(3, 2).build(m).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &lp, |b, lp| b.iter(|| maslov_index(lp).unwrap()));
    }
    group.finish();
}

fn hormander(c: &mut Criterion) {
    let mut group = c.benchmark_group("hormander_index");
    for n in [1, 2, 3, 6] {
        let [x, y, z, w, _] = planes(n, 1);
        group.bench_function(BenchmarkId::from_parameter(n), |b| b.iter(|| index_of(&x, &y, &z, &w).unwrap()));
    }
    group.finish();
}

fn curvature(c: &mut Criterion) {
    let mut group = c.benchmark_group("mean_curvature");
    group.sample_size(10);
    for m in [64, 128, 256] {
        let grid = torus(m).build().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &grid, |b, g| b.iter(|| analyze(g).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, maslov, hormander, curvature);
criterion_main!(benches);
