//! Benchmarks for the data-parallel enumeration paths, comparing the rayon
//! pool against a single-thread pool on the same inputs. The sequential
//! numbers double as a reference for the `--no-default-features` build,
//! whose code path is the plain iterator version of the same loops.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use gkz::exact::{Int, Rat};
use gkz::geometry::{self, WeightVector};
use gkz::{series, slopes, IntMatrix};
use rand::{Rng, SeedableRng};

fn bench_matrix(d: usize, n: usize, seed: u64) -> IntMatrix {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect())
            .collect();
        let m = IntMatrix::from_rows(&rows);
        if m.rank() == d {
            return m;
        }
    }
}

fn pools() -> (rayon::ThreadPool, rayon::ThreadPool) {
    let seq = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let par = rayon::ThreadPoolBuilder::new().build().unwrap();
    (seq, par)
}

fn bench_umbrella(c: &mut Criterion) {
    let a = bench_matrix(4, 11, 7);
    let w = WeightVector::ones(11);
    let (seq, par) = pools();
    // identical results either way
    let lhs = seq.install(|| geometry::umbrella(&a, &w).unwrap().facet_sets(4));
    let rhs = par.install(|| geometry::umbrella(&a, &w).unwrap().facet_sets(4));
    assert_eq!(lhs, rhs);

    let mut group = c.benchmark_group("umbrella_4x11");
    group.bench_function("sequential", |b| {
        b.iter(|| seq.install(|| geometry::umbrella(&a, &w).unwrap()))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| par.install(|| geometry::umbrella(&a, &w).unwrap()))
    });
    group.finish();
}

fn bench_series(c: &mut Criterion) {
    let a = IntMatrix::from_rows(&[vec![1, 0, 3], vec![0, 2, 1]]);
    let beta = vec![
        Rat::new(Int::from(1), Int::from(2)),
        Rat::new(Int::from(1), Int::from(3)),
    ];
    let (seq, par) = pools();
    let mut group = c.benchmark_group("series_truncation_n90");
    group.sample_size(20);
    group.bench_function("sequential", |b| {
        b.iter_batched(
            || (),
            |_| {
                seq.install(|| {
                    series::gamma_series_truncated(&a, &[0, 1], &beta, &[Int::from(0)], 90).unwrap()
                })
            },
            BatchSize::SmallInput,
        )
    });
    group.bench_function("parallel", |b| {
        b.iter_batched(
            || (),
            |_| {
                par.install(|| {
                    series::gamma_series_truncated(&a, &[0, 1], &beta, &[Int::from(0)], 90).unwrap()
                })
            },
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_slopes(c: &mut Criterion) {
    let a = bench_matrix(3, 8, 21);
    let (seq, par) = pools();
    let lhs = seq.install(|| slopes::slopes_along_hyperplane(&a, 0).unwrap().slopes);
    let rhs = par.install(|| slopes::slopes_along_hyperplane(&a, 0).unwrap().slopes);
    assert_eq!(lhs, rhs);

    let mut group = c.benchmark_group("slopes_3x8");
    group.sample_size(20);
    group.bench_function("sequential", |b| {
        b.iter(|| seq.install(|| slopes::slopes_along_hyperplane(&a, 0).unwrap()))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| par.install(|| slopes::slopes_along_hyperplane(&a, 0).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_umbrella, bench_series, bench_slopes);
criterion_main!(benches);
