//! Benchmark suite for the optimizer pipeline and metric kernels.
//!
//! `exhaustive/*` compares the sequential reference walk against the
//! default (rayon-partitioned) search in one run. The metric and optimizer
//! benches follow the active feature set: run once with defaults and once
//! with `--no-default-features` to compare the parallel and sequential
//! builds of those kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hawkthresh_core::hho::{run, HhoParams};
use hawkthresh_core::imagery::{apply_thresholds, compute_histogram, Bounds, ThresholdVector};
use hawkthresh_core::metrics::{fsim, hpsi, psnr, qilv, ssim};
use hawkthresh_core::objectives::{FitnessEvaluator, ObjectiveKind, ObjectiveWeights};
use hawkthresh_core::oracle::{exhaustive_search, exhaustive_search_seq};
use hawkthresh_core::synth::{multimodal_image, random_histogram};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_objectives(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let hist = random_histogram(&mut rng, 180, 500);
    let evaluator = FitnessEvaluator::new(&hist, ObjectiveKind::Hybrid, ObjectiveWeights::default());
    let th = ThresholdVector::new(vec![40, 90, 140, 190, 240], Bounds::default()).unwrap();
    c.bench_function("objective/hybrid_eval_n5", |b| {
        b.iter(|| black_box(evaluator.eval(black_box(&th))))
    });
}

fn bench_optimizer(c: &mut Criterion) {
    let img = multimodal_image(3, 96, 96, 5);
    let hist = compute_histogram(&img);
    c.bench_function("hho/run_m20_g100_n4", |b| {
        b.iter(|| {
            let params = HhoParams {
                pop_size: 20,
                max_iters: 100,
                seed: 9,
                early_stop: false,
                ..HhoParams::default()
            };
            black_box(run(&hist, 4, &params, ObjectiveKind::Hybrid).unwrap())
        })
    });
}

fn bench_exhaustive(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let hist = random_histogram(&mut rng, 48, 400);
    let evaluator = FitnessEvaluator::new(&hist, ObjectiveKind::Hybrid, ObjectiveWeights::default());
    let bounds = Bounds::default();
    let mut group = c.benchmark_group("exhaustive");
    for n in [2usize, 3] {
        group.bench_with_input(BenchmarkId::new("seq", n), &n, |b, &n| {
            b.iter(|| {
                black_box(exhaustive_search_seq(&hist, n, &evaluator, bounds, None).unwrap())
            })
        });
        group.bench_with_input(BenchmarkId::new("default", n), &n, |b, &n| {
            b.iter(|| black_box(exhaustive_search(&hist, n, &evaluator, bounds, None).unwrap()))
        });
    }
    group.finish();
}

fn bench_metrics(c: &mut Criterion) {
    let img = multimodal_image(4, 256, 256, 5);
    let hist = compute_histogram(&img);
    let th = ThresholdVector::new(vec![52, 103, 154, 205], Bounds::default()).unwrap();
    let seg = apply_thresholds(&img, &th, &hist).unwrap();
    let mut group = c.benchmark_group("metrics_256x256");
    group.sample_size(20);
    group.bench_function("psnr", |b| b.iter(|| black_box(psnr(&img, &seg).unwrap())));
    group.bench_function("ssim", |b| b.iter(|| black_box(ssim(&img, &seg).unwrap())));
    group.bench_function("qilv", |b| b.iter(|| black_box(qilv(&img, &seg).unwrap())));
    group.bench_function("hpsi", |b| b.iter(|| black_box(hpsi(&img, &seg).unwrap())));
    group.bench_function("fsim", |b| b.iter(|| black_box(fsim(&img, &seg).unwrap())));
    group.finish();
}

criterion_group!(
    benches,
    bench_objectives,
    bench_optimizer,
    bench_exhaustive,
    bench_metrics
);
criterion_main!(benches);
