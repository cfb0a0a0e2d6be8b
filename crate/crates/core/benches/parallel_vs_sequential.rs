//! Run once with default features and once with `--no-default-features` to
//! compare the rayon build against the sequential build. Within one build the
//! `threads-1` rows show the cost of the pool with a single worker.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use mldeg::engine::ml_table;
use mldeg::oracle::{count_critical_points_3x3, DataMatrix, OracleParams};
use mldeg::parallel::with_threads;

const BUILD: &str = if cfg!(feature = "parallel") {
    "parallel"
} else {
    "sequential"
};

fn oracle(c: &mut Criterion) {
    let u = DataMatrix::from_rows(&[vec![7, 11, 5], vec![3, 13, 2], vec![8, 6, 9]]).unwrap();
    let params = OracleParams {
        starts: 400,
        ..OracleParams::default()
    };
    let mut group = c.benchmark_group("oracle-400-starts");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new(BUILD, "default"), |b| {
        b.iter(|| count_critical_points_3x3(&u, &params).unwrap().count)
    });
    group.bench_function(BenchmarkId::new(BUILD, "threads-1"), |b| {
        b.iter(|| {
            with_threads(Some(1), || {
                count_critical_points_3x3(&u, &params).unwrap().count
            })
        })
    });
    group.finish();
}

fn table(c: &mut Criterion) {
    let mut group = c.benchmark_group("ml-table-20x40");
    group.sample_size(20);
    group.bench_function(BenchmarkId::new(BUILD, "default"), |b| {
        b.iter(|| ml_table(20, 40).unwrap())
    });
    group.bench_function(BenchmarkId::new(BUILD, "threads-1"), |b| {
        b.iter(|| with_threads(Some(1), || ml_table(20, 40).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, oracle, table);
criterion_main!(benches);
