//! Parallel versus single-threaded execution of the hot loops.
//!
//! The `parallel` group runs on rayon's global pool, `single` inside a
//! one-thread pool. Build with `--no-default-features` to time the plain
//! sequential fallback instead (both groups then take the same path).

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use l1lab::{
    distortion, estimate_constant, iterated_tensor_l1, sample_gaussian, sample_stable, ConstantMode, SequenceNorm,
    StableSampleSpec, StepVector,
};

fn single_pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()
}

fn bench_tensor(c: &mut Criterion) {
    let e = sample_stable(&StableSampleSpec::new(1.5, 4, 4096, 1)).unwrap();
    let f = sample_gaussian(4, 4096, 2).unwrap();
    let xs: Vec<StepVector> = f.basis().to_vec();
    let single = single_pool();
    let mut group = c.benchmark_group("iterated_tensor_l1");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("parallel", "4x4096^2"), |b| {
        b.iter(|| iterated_tensor_l1(black_box(&e), black_box(&xs), f.measure()).unwrap())
    });
    group.bench_function(BenchmarkId::new("single", "4x4096^2"), |b| {
        b.iter(|| single.install(|| iterated_tensor_l1(black_box(&e), black_box(&xs), f.measure()).unwrap()))
    });
    group.finish();
}

fn bench_estimate(c: &mut Criterion) {
    let e = SequenceNorm::lp(1.5).unwrap();
    let mode = ConstantMode::Concavity { r: 2.0 };
    let single = single_pool();
    let mut group = c.benchmark_group("estimate_constant");
    group.bench_function("parallel", |b| {
        b.iter(|| estimate_constant(black_box(&e), mode, 6, 3, 64, 7).unwrap())
    });
    group.bench_function("single", |b| {
        b.iter(|| single.install(|| estimate_constant(black_box(&e), mode, 6, 3, 64, 7).unwrap()))
    });
    group.finish();
}

fn bench_distortion(c: &mut Criterion) {
    let real = sample_stable(&StableSampleSpec::new(1.5, 6, 20_000, 3)).unwrap();
    let domain = SequenceNorm::lp(1.5).unwrap();
    let single = single_pool();
    let mut group = c.benchmark_group("distortion");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| distortion(&real, &domain, 64, 1, 5).unwrap()));
    group.bench_function("single", |b| {
        b.iter(|| single.install(|| distortion(&real, &domain, 64, 1, 5).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_tensor, bench_estimate, bench_distortion);
criterion_main!(benches);
