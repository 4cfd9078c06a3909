//! Hot-path benchmarks: the posterior fold (linear in n at fixed m), the
//! erasure rank shortcut, the ensemble formula, and simulation throughput.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use leakage::{
    average_leakage_pmf, bec_leakage_rank, conditional_leakage, simulate_leakage_histogram,
    BinaryInputChannel, CosetEncoder, GF2Matrix, Observation, SimulationConfig, DEFAULT_M_CAP,
};

fn posterior_fold(c: &mut Criterion) {
    let channel = BinaryInputChannel::bsc(0.1).unwrap();
    let mut group = c.benchmark_group("posterior_fold_m16");
    group.sample_size(10);
    for n in [500usize, 1000, 2000] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let a = GF2Matrix::random(16, n, &mut rng);
        let symbols: Vec<String> = (0..n)
            .map(|_| if rng.gen::<bool>() { "1".into() } else { "0".into() })
            .collect();
        let z = Observation::from_symbols(symbols);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| conditional_leakage(black_box(&a), &channel, &z, DEFAULT_M_CAP).unwrap());
        });
    }
    group.finish();
}

fn erasure_rank(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = CosetEncoder::random(100, 200, &mut rng)
        .unwrap()
        .matrix()
        .clone();
    let bits: Vec<u8> = (0..200).map(|_| rng.gen_range(0..=1)).collect();
    let erased: Vec<usize> = (0..200).filter(|_| rng.gen::<f64>() < 0.5).collect();
    let z = Observation::bec_from_parts(&bits, &erased);
    c.bench_function("bec_rank_100x200", |b| {
        b.iter(|| bec_leakage_rank(black_box(&a), black_box(&z)).unwrap());
    });
}

fn ensemble_formula(c: &mut Criterion) {
    c.bench_function("ensemble_pmf_100x200", |b| {
        b.iter(|| average_leakage_pmf(black_box(100), black_box(200), black_box(0.54)).unwrap());
    });
}

fn simulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate_bec_24x48");
    group.sample_size(10);
    group.throughput(Throughput::Elements(1000));
    group.bench_function("1000_samples", |b| {
        b.iter(|| {
            let config =
                SimulationConfig::new(24, 48, BinaryInputChannel::bec(0.46).unwrap(), 1000, 99);
            simulate_leakage_histogram(black_box(&config)).unwrap()
        });
    });
    group.finish();
}

criterion_group!(benches, posterior_fold, erasure_rank, ensemble_formula, simulation);
criterion_main!(benches);
